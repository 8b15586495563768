//! Integer lattice primitives: axis directions, 3-vectors and planar frames.

use std::fmt;

pub type Vec3 = [i32; 3];

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn dot(a: Vec3, b: Vec3) -> i32 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// One of the six axis-aligned unit directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    PosX,
    NegX,
    PosY,
    NegY,
    PosZ,
    NegZ,
}

impl Dir {
    pub const ALL: [Dir; 6] = [Dir::PosX, Dir::NegX, Dir::PosY, Dir::NegY, Dir::PosZ, Dir::NegZ];
    pub const HORIZONTAL: [Dir; 4] = [Dir::PosX, Dir::PosY, Dir::NegX, Dir::NegY];

    pub fn vec(self) -> Vec3 {
        match self {
            Dir::PosX => [1, 0, 0],
            Dir::NegX => [-1, 0, 0],
            Dir::PosY => [0, 1, 0],
            Dir::NegY => [0, -1, 0],
            Dir::PosZ => [0, 0, 1],
            Dir::NegZ => [0, 0, -1],
        }
    }

    pub fn from_vec(v: Vec3) -> Option<Dir> {
        Dir::ALL.into_iter().find(|d| d.vec() == v)
    }

    pub fn neg(self) -> Dir {
        match self {
            Dir::PosX => Dir::NegX,
            Dir::NegX => Dir::PosX,
            Dir::PosY => Dir::NegY,
            Dir::NegY => Dir::PosY,
            Dir::PosZ => Dir::NegZ,
            Dir::NegZ => Dir::PosZ,
        }
    }

    pub fn axis(self) -> usize {
        match self {
            Dir::PosX | Dir::NegX => 0,
            Dir::PosY | Dir::NegY => 1,
            Dir::PosZ | Dir::NegZ => 2,
        }
    }

    pub fn is_horizontal(self) -> bool {
        self.axis() != 2
    }

    /// Quarter turn counterclockwise about +z (viewed from above).
    pub fn ccw(self) -> Dir {
        match self {
            Dir::PosX => Dir::PosY,
            Dir::PosY => Dir::NegX,
            Dir::NegX => Dir::NegY,
            Dir::NegY => Dir::PosX,
            d => d,
        }
    }

    pub fn cw(self) -> Dir {
        self.ccw().ccw().ccw()
    }

    /// Tangent pair `(u, v)` with `u x v = self`. For side faces `v` is +z,
    /// so `u` points right when the face is viewed from outside.
    pub fn tangents(self) -> (Dir, Dir) {
        match self {
            Dir::PosZ => (Dir::PosX, Dir::PosY),
            Dir::NegZ => (Dir::PosY, Dir::PosX),
            d => (d.ccw(), Dir::PosZ),
        }
    }

    /// Direction of local edge `k` (0: +u, 1: +v, 2: -u, 3: -v) of a face with this normal.
    pub fn edge_dir(self, k: u8) -> Dir {
        let (u, v) = self.tangents();
        match k & 3 {
            0 => u,
            1 => v,
            2 => u.neg(),
            _ => v.neg(),
        }
    }

    /// Inverse of [`Dir::edge_dir`].
    pub fn edge_index(self, side: Dir) -> Option<u8> {
        (0..4u8).find(|&k| self.edge_dir(k) == side)
    }

    pub fn name(self) -> &'static str {
        match self {
            Dir::PosX => "+x",
            Dir::NegX => "-x",
            Dir::PosY => "+y",
            Dir::NegY => "-y",
            Dir::PosZ => "+z",
            Dir::NegZ => "-z",
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Walking sense around a band, as seen from +z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Turn {
    Ccw,
    Cw,
}

impl Turn {
    pub fn flip(self) -> Turn {
        match self {
            Turn::Ccw => Turn::Cw,
            Turn::Cw => Turn::Ccw,
        }
    }

    /// Heading along a band cell with outward normal `n` when walking in this sense.
    pub fn heading(self, n: Dir) -> Dir {
        match self {
            Turn::Ccw => n.ccw(),
            Turn::Cw => n.cw(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Turn::Ccw => "ccw",
            Turn::Cw => "cw",
        }
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Horizontal reorientation used to reason about a layer as if a chosen
/// band cell faced `+y` and the layer were walked toward `+x` from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    front: Dir,
    heading: Dir,
}

/// Role of a horizontal direction inside a [`Frame`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Front,
    Back,
    Left,
    Right,
}

impl Frame {
    pub fn new(front: Dir, turn: Turn) -> Frame {
        Frame { front, heading: turn.heading(front) }
    }

    pub fn side(&self, d: Dir) -> Option<Side> {
        if d == self.front {
            Some(Side::Front)
        } else if d == self.front.neg() {
            Some(Side::Back)
        } else if d == self.heading {
            Some(Side::Right)
        } else if d == self.heading.neg() {
            Some(Side::Left)
        } else {
            None
        }
    }
}

/// Unit step on the net grid for side `s` (0: +col, 1: +row, 2: -col, 3: -row).
pub fn net_step(s: u8) -> (i32, i32) {
    match s & 3 {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cross(a: Vec3, b: Vec3) -> Vec3 {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    }

    #[test]
    fn tangents_are_right_handed() {
        for d in Dir::ALL {
            let (u, v) = d.tangents();
            assert_eq!(cross(u.vec(), v.vec()), d.vec(), "{d}");
        }
    }

    #[test]
    fn edge_index_inverts_edge_dir() {
        for d in Dir::ALL {
            for k in 0..4 {
                assert_eq!(d.edge_index(d.edge_dir(k)), Some(k));
            }
            assert_eq!(d.edge_index(d), None);
        }
    }

    #[test]
    fn ccw_heading_points_right_from_outside() {
        // facing a +y wall from outside, right hand is -x
        assert_eq!(Turn::Ccw.heading(Dir::PosY), Dir::NegX);
        assert_eq!(Dir::PosY.edge_dir(0), Dir::NegX);
    }

    #[test]
    fn frame_sides() {
        let f = Frame::new(Dir::PosY, Turn::Ccw);
        assert_eq!(f.side(Dir::NegX), Some(Side::Right));
        assert_eq!(f.side(Dir::PosX), Some(Side::Left));
        assert_eq!(f.side(Dir::NegY), Some(Side::Back));
        assert_eq!(f.side(Dir::PosZ), None);
    }
}
