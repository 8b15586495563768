//! Polycube solids, their boundary surface and the precondition checks the
//! unfolder relies on.
//!
//! Two text formats are accepted by [`load_voxels`]:
//!
//! * **Coordinate list.** One cube per line as three whitespace separated
//!   integers `x y z`. A `#` starts a comment that runs to the end of the line.
//!   Blank lines are ignored.
//! * **Layered ASCII.** Every non-blank line consists only of `#` (cube) and
//!   `.` (empty). Blocks of rows are separated by one or more blank lines. The
//!   first block is the lowest layer; inside a block the first row has the
//!   smallest `y` and the first character of a row has the smallest `x`.
//!
//! A file is read as layered ASCII exactly when all of its non-blank lines
//! match `^[#.]+$`.
//!
//! Coordinates are translated so that the minimum corner of the bounding box
//! is the origin. Layer `i` (1-based) holds the cubes with `z = i - 1`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::geom::{add, Dir, Vec3};

pub type CellId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("model contains no cubes")]
    Empty,
    #[error("surface is not a 2-manifold: {0}")]
    NonManifold(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// A finite set of unit cubes `[x,x+1] x [y,y+1] x [z,z+1]`, translated so
/// that its bounding box starts at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polycube {
    cubes: BTreeSet<Vec3>,
    dims: [i32; 3],
    occupied: Vec<bool>,
}

impl Polycube {
    pub fn new<I: IntoIterator<Item = Vec3>>(cubes: I) -> Result<Polycube, ModelError> {
        let raw: Vec<Vec3> = cubes.into_iter().collect();
        if raw.is_empty() {
            return Err(ModelError::Empty);
        }
        let mut min = raw[0];
        for c in &raw {
            for k in 0..3 {
                min[k] = min[k].min(c[k]);
            }
        }
        let cubes: BTreeSet<Vec3> = raw.iter().map(|c| [c[0] - min[0], c[1] - min[1], c[2] - min[2]]).collect();
        let mut dims = [0; 3];
        for c in &cubes {
            for k in 0..3 {
                dims[k] = dims[k].max(c[k] + 1);
            }
        }
        // Dense occupancy grid unless the bounding box is mostly empty.
        let volume: u128 = dims.iter().map(|&d| d as u128).product();
        let mut occupied = Vec::new();
        if volume <= 64 * cubes.len() as u128 + 4096 {
            occupied = vec![false; volume as usize];
            for c in &cubes {
                occupied[((c[2] * dims[1] + c[1]) * dims[0] + c[0]) as usize] = true;
            }
        }
        Ok(Polycube { cubes, dims, occupied })
    }

    pub fn cubes(&self) -> impl Iterator<Item = &Vec3> + '_ {
        self.cubes.iter()
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn contains(&self, c: Vec3) -> bool {
        let d = self.dims;
        if (0..3).any(|k| c[k] < 0 || c[k] >= d[k]) {
            return false;
        }
        if self.occupied.is_empty() {
            return self.cubes.contains(&c);
        }
        self.occupied[((c[2] * d[1] + c[1]) * d[0] + c[0]) as usize]
    }

    /// Number of layers `m`.
    pub fn layers(&self) -> usize {
        self.dims[2] as usize
    }

    /// Columns `(x, y)` of layer `i` (1-based).
    pub fn layer_columns(&self, i: usize) -> BTreeSet<(i32, i32)> {
        let z = i as i32 - 1;
        self.cubes.iter().filter(|c| c[2] == z).map(|c| (c[0], c[1])).collect()
    }

    /// Boundary area counted directly from exposed cube faces.
    pub fn exposed_faces(&self) -> usize {
        self.cubes
            .iter()
            .map(|&c| Dir::ALL.iter().filter(|d| !self.contains(add(c, d.vec()))).count())
            .sum()
    }

    /// Coordinate-list serialization (format a), sorted by `(z, y, x)`.
    pub fn to_text(&self) -> String {
        let mut v: Vec<Vec3> = self.cubes.iter().copied().collect();
        v.sort_by_key(|c| (c[2], c[1], c[0]));
        let mut out = String::new();
        for c in v {
            out.push_str(&format!("{} {} {}\n", c[0], c[1], c[2]));
        }
        out
    }
}

pub fn load_voxels(text: &str) -> Result<Polycube, ModelError> {
    let ascii = text.lines().any(|l| !l.trim().is_empty())
        && text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .all(|l| l.chars().all(|c| c == '#' || c == '.'));
    if ascii {
        parse_ascii(text)
    } else {
        parse_coords(text)
    }
}

fn parse_coords(text: &str) -> Result<Polycube, ModelError> {
    let mut cubes = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(ModelError::Parse {
                line: n + 1,
                msg: format!("expected 3 integers, found {} fields", fields.len()),
            });
        }
        let mut c = [0i32; 3];
        for (k, f) in fields.iter().enumerate() {
            c[k] = f.parse().map_err(|_| ModelError::Parse {
                line: n + 1,
                msg: format!("not an integer: {f:?}"),
            })?;
        }
        cubes.push(c);
    }
    Polycube::new(cubes)
}

fn parse_ascii(text: &str) -> Result<Polycube, ModelError> {
    let mut cubes = Vec::new();
    let mut z = 0;
    let mut y = 0;
    let mut in_block = false;
    for line in text.lines().map(str::trim) {
        if line.is_empty() {
            if in_block {
                z += 1;
                y = 0;
                in_block = false;
            }
            continue;
        }
        in_block = true;
        for (x, ch) in line.chars().enumerate() {
            if ch == '#' {
                cubes.push([x as i32, y, z]);
            }
        }
        y += 1;
    }
    Polycube::new(cubes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    Band,
    Top,
    Bottom,
}

impl CellKind {
    pub fn name(self) -> &'static str {
        match self {
            CellKind::Band => "band",
            CellKind::Top => "top",
            CellKind::Bottom => "bottom",
        }
    }
}

/// One unit face of the boundary. `cube` is the solid cube behind it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceCell {
    pub id: CellId,
    pub cube: Vec3,
    pub normal: Dir,
    pub kind: CellKind,
}

impl SurfaceCell {
    /// Minimum corner of the unit square.
    pub fn base(&self) -> Vec3 {
        let mut b = self.cube;
        let v = self.normal.vec();
        for k in 0..3 {
            if v[k] > 0 {
                b[k] += 1;
            }
        }
        b
    }

    /// Twice the center point, so it stays integral.
    pub fn center2(&self) -> Vec3 {
        let v = self.normal.vec();
        [
            2 * self.cube[0] + 1 + v[0],
            2 * self.cube[1] + 1 + v[1],
            2 * self.cube[2] + 1 + v[2],
        ]
    }

    /// Band index for side cells (1-based).
    pub fn band(&self) -> usize {
        self.cube[2] as usize + 1
    }

    /// Height of the horizontal plane holding a top or bottom cell.
    pub fn plane(&self) -> usize {
        match self.normal {
            Dir::PosZ => self.cube[2] as usize + 1,
            _ => self.cube[2] as usize,
        }
    }

    /// Doubled lattice coordinates of the two endpoints of edge `k`.
    pub fn edge_ends2(&self, k: u8) -> (Vec3, Vec3) {
        let c = self.center2();
        let e = self.normal.edge_dir(k).vec();
        let (u, v) = self.normal.tangents();
        let other = if self.normal.edge_dir(k).axis() == u.axis() { v } else { u };
        let o = other.vec();
        let mid = [c[0] + e[0], c[1] + e[1], c[2] + e[2]];
        let a = [mid[0] + o[0], mid[1] + o[1], mid[2] + o[2]];
        let b = [mid[0] - o[0], mid[1] - o[1], mid[2] - o[2]];
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// The boundary of a polycube as a quad complex with edge adjacency.
#[derive(Debug, Clone)]
pub struct Surface {
    cells: Vec<SurfaceCell>,
    index: HashMap<(Vec3, Dir), CellId>,
    /// `adj[c][k] = (n, kn)`: across edge `k` of `c` lies edge `kn` of `n`.
    adj: Vec<[(CellId, u8); 4]>,
    layers: usize,
    vertices: usize,
    edges: usize,
}

impl Surface {
    pub fn cells(&self) -> &[SurfaceCell] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> &SurfaceCell {
        &self.cells[id]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn find(&self, cube: Vec3, normal: Dir) -> Option<CellId> {
        self.index.get(&(cube, normal)).copied()
    }

    pub fn neighbor(&self, c: CellId, k: u8) -> (CellId, u8) {
        self.adj[c][k as usize & 3]
    }

    /// Neighbor of `c` across its edge lying in direction `side`.
    pub fn neighbor_toward(&self, c: CellId, side: Dir) -> Option<CellId> {
        self.cells[c].normal.edge_index(side).map(|k| self.adj[c][k as usize].0)
    }

    /// Edge of `a` shared with `b`, if they are edge-adjacent.
    pub fn shared_edge(&self, a: CellId, b: CellId) -> Option<u8> {
        (0..4u8).find(|&k| self.adj[a][k as usize].0 == b)
    }

    pub fn is_band(&self, c: CellId) -> bool {
        self.cells[c].kind == CellKind::Band
    }

    /// Counts `(V, E, F)` of the cell complex.
    pub fn euler_counts(&self) -> (usize, usize, usize) {
        (self.vertices, self.edges, self.cells.len())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.cells.len() as i64
    }

    pub fn band_cells(&self, i: usize) -> impl Iterator<Item = CellId> + '_ {
        self.cells.iter().filter(move |c| c.kind == CellKind::Band && c.band() == i).map(|c| c.id)
    }

    /// Top faces of layer `i` (on the `i`-plane).
    pub fn top_cells(&self, i: usize) -> impl Iterator<Item = CellId> + '_ {
        self.cells
            .iter()
            .filter(move |c| c.kind == CellKind::Top && c.cube[2] as usize + 1 == i)
            .map(|c| c.id)
    }

    /// Bottom faces of layer `i` (on the `(i-1)`-plane).
    pub fn bottom_cells(&self, i: usize) -> impl Iterator<Item = CellId> + '_ {
        self.cells
            .iter()
            .filter(move |c| c.kind == CellKind::Bottom && c.cube[2] as usize + 1 == i)
            .map(|c| c.id)
    }

    /// Maximal edge-connected set of coplanar horizontal cells containing `c`.
    pub fn face_of(&self, c: CellId) -> BTreeSet<CellId> {
        let mut seen = BTreeSet::from([c]);
        let mut queue = VecDeque::from([c]);
        let normal = self.cells[c].normal;
        while let Some(x) = queue.pop_front() {
            for k in 0..4 {
                let (n, _) = self.neighbor(x, k);
                if self.cells[n].normal == normal && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen
    }
}

fn neighbor_of(p: &Polycube, cube: Vec3, n: Dir, t: Dir) -> (Vec3, Dir, Dir) {
    let tn = add(add(cube, t.vec()), n.vec());
    if p.contains(tn) {
        return (tn, t.neg(), n.neg());
    }
    let tt = add(cube, t.vec());
    if p.contains(tt) {
        return (tt, n, t.neg());
    }
    (cube, t, n)
}

/// Cube pairs that meet along an edge only, or at a vertex only.
fn manifold_defects(p: &Polycube) -> Vec<String> {
    let mut out = Vec::new();
    for &c in p.cubes() {
        for (ai, a) in Dir::ALL.iter().enumerate() {
            for b in &Dir::ALL[ai + 1..] {
                if a.axis() == b.axis() {
                    continue;
                }
                let diag = add(add(c, a.vec()), b.vec());
                if p.contains(diag) && !p.contains(add(c, a.vec())) && !p.contains(add(c, b.vec())) && c < diag {
                    out.push(format!("cubes {c:?} and {diag:?} share only an edge"));
                }
            }
        }
    }
    out
}

pub fn extract_surface(p: &Polycube) -> Result<Surface, ModelError> {
    if p.is_empty() {
        return Err(ModelError::Empty);
    }
    if let Some(d) = manifold_defects(p).into_iter().next() {
        return Err(ModelError::NonManifold(d));
    }
    let mut raw: Vec<SurfaceCell> = Vec::new();
    for &c in p.cubes() {
        for d in Dir::ALL {
            if !p.contains(add(c, d.vec())) {
                let kind = match d {
                    Dir::PosZ => CellKind::Top,
                    Dir::NegZ => CellKind::Bottom,
                    _ => CellKind::Band,
                };
                raw.push(SurfaceCell { id: 0, cube: c, normal: d, kind });
            }
        }
    }
    raw.sort_by_key(|c| {
        let b = c.base();
        (b[2], b[1], b[0], c.normal, c.cube[2])
    });
    let mut index = HashMap::with_capacity(raw.len());
    for (i, c) in raw.iter_mut().enumerate() {
        c.id = i;
        index.insert((c.cube, c.normal), i);
    }
    let mut adj = vec![[(0usize, 0u8); 4]; raw.len()];
    for c in &raw {
        for k in 0..4u8 {
            let t = c.normal.edge_dir(k);
            let (nc, nn, nside) = neighbor_of(p, c.cube, c.normal, t);
            let nid = *index
                .get(&(nc, nn))
                .ok_or_else(|| ModelError::Internal(format!("missing neighbor face {nc:?} {nn}")))?;
            let kn = nn
                .edge_index(nside)
                .ok_or_else(|| ModelError::Internal("neighbor edge not tangent".into()))?;
            adj[c.id][k as usize] = (nid, kn);
        }
    }
    for c in &raw {
        for k in 0..4u8 {
            let (n, kn) = adj[c.id][k as usize];
            if adj[n][kn as usize] != (c.id, k) {
                return Err(ModelError::NonManifold(format!(
                    "edge {k} of cell {} is not shared by exactly two cells",
                    c.id
                )));
            }
        }
    }
    let mut incidences: Vec<(Vec3, CellId)> = Vec::with_capacity(raw.len() * 8);
    let mut edges: Vec<(Vec3, Vec3)> = Vec::with_capacity(raw.len() * 4);
    for c in &raw {
        for k in 0..4u8 {
            let (a, b) = c.edge_ends2(k);
            edges.push((a, b));
            incidences.push((a, c.id));
            incidences.push((b, c.id));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    incidences.sort_unstable();
    incidences.dedup();
    let mut vertex_count = 0;
    for group in incidences.chunk_by(|x, y| x.0 == y.0) {
        vertex_count += 1;
        let v = group[0].0;
        let ring = vertex_ring_len(&raw, &adj, v, group[0].1);
        if ring != group.len() {
            return Err(ModelError::NonManifold(format!(
                "vertex {:?} has a pinched neighborhood ({} of {} cells in one ring)",
                [v[0] / 2, v[1] / 2, v[2] / 2],
                ring,
                group.len()
            )));
        }
    }
    let layers = p.layers();
    Ok(Surface {
        vertices: vertex_count,
        edges: edges.len(),
        cells: raw,
        index,
        adj,
        layers,
    })
}

fn incident_edges(cell: &SurfaceCell, v2: Vec3) -> Vec<u8> {
    (0..4u8)
        .filter(|&k| {
            let (a, b) = cell.edge_ends2(k);
            a == v2 || b == v2
        })
        .collect()
}

fn vertex_ring_len(cells: &[SurfaceCell], adj: &[[(CellId, u8); 4]], v2: Vec3, start: CellId) -> usize {
    let first = incident_edges(&cells[start], v2);
    let mut cur = start;
    let mut out_edge = first[0];
    let mut count = 1;
    loop {
        let (n, kin) = adj[cur][out_edge as usize];
        if n == start {
            return count;
        }
        count += 1;
        if count > cells.len() {
            return count;
        }
        let inc = incident_edges(&cells[n], v2);
        out_edge = match inc.iter().find(|&&k| k != kin) {
            Some(&k) => k,
            None => return count,
        };
        cur = n;
    }
}

/// Whether every axis-parallel line meets the cells in one run at most.
pub fn is_orthogonally_convex(cells: &BTreeSet<(i32, i32)>) -> bool {
    let mut rows: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
    let mut cols: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
    for &(x, y) in cells {
        rows.entry(y).or_default().push(x);
        cols.entry(x).or_default().push(y);
    }
    let contiguous = |v: &mut Vec<i32>| {
        v.sort_unstable();
        v.windows(2).all(|w| w[1] == w[0] + 1)
    };
    rows.values_mut().all(contiguous) && cols.values_mut().all(contiguous)
}

pub fn is_connected_polyomino(cells: &BTreeSet<(i32, i32)>) -> bool {
    let Some(&start) = cells.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = vec![start];
    while let Some((x, y)) = queue.pop() {
        for n in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
            if cells.contains(&n) && seen.insert(n) {
                queue.push(n);
            }
        }
    }
    seen.len() == cells.len()
}

fn is_face_connected(p: &Polycube) -> bool {
    let Some(&start) = p.cubes().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = vec![start];
    while let Some(c) = queue.pop() {
        for d in Dir::ALL {
            let n = add(c, d.vec());
            if p.contains(n) && seen.insert(n) {
                queue.push(n);
            }
        }
    }
    seen.len() == p.len()
}

/// Independent pass/fail flags for the unfolder's preconditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub face_connected: bool,
    pub manifold: bool,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    pub genus_zero: bool,
    pub layers_convex: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.face_connected && self.manifold && self.genus_zero && self.layers_convex
    }

    pub fn to_text(&self) -> String {
        let flag = |b: bool| if b { "pass" } else { "fail" };
        let mut s = format!(
            "face_connected {}\nmanifold {}\nV {} E {} F {} chi {}\ngenus_zero {}\nlayers_convex {}\n",
            flag(self.face_connected),
            flag(self.manifold),
            self.vertices,
            self.edges,
            self.faces,
            self.euler,
            flag(self.genus_zero),
            flag(self.layers_convex)
        );
        for f in &self.failures {
            s.push_str(&format!("failure {f}\n"));
        }
        s.push_str(&format!("valid {}\n", if self.ok() { "yes" } else { "no" }));
        s
    }
}

/// Vertices, edges and faces of all exposed unit squares, counted without
/// any manifold assumption.
fn raw_euler(p: &Polycube) -> (usize, usize, usize) {
    let mut verts = Vec::new();
    let mut edges = Vec::new();
    let mut faces = 0;
    for &c in p.cubes() {
        for d in Dir::ALL {
            if p.contains(add(c, d.vec())) {
                continue;
            }
            faces += 1;
            let cell = SurfaceCell { id: 0, cube: c, normal: d, kind: CellKind::Band };
            for k in 0..4 {
                let (a, b) = cell.edge_ends2(k);
                verts.push(a);
                verts.push(b);
                edges.push((a, b));
            }
        }
    }
    verts.sort_unstable();
    verts.dedup();
    edges.sort_unstable();
    edges.dedup();
    (verts.len(), edges.len(), faces)
}

pub fn validate(p: &Polycube) -> ValidationReport {
    validate_with_surface(p).0
}

/// Validation report plus the extracted surface, when extraction succeeded.
pub fn validate_with_surface(p: &Polycube) -> (ValidationReport, Option<Surface>) {
    let mut failures = Vec::new();
    let face_connected = is_face_connected(p);
    if !face_connected {
        failures.push("cubes are not face-connected".to_string());
    }
    let surface = match extract_surface(p) {
        Ok(s) => Some(s),
        Err(e) => {
            failures.push(e.to_string());
            None
        }
    };
    let manifold = surface.is_some();
    let (v, e, f) = raw_euler(p);
    let euler = v as i64 - e as i64 + f as i64;
    let genus_zero = euler == 2;
    if !genus_zero {
        failures.push(format!("Euler characteristic is {euler}, expected 2"));
    }
    let mut layers_convex = true;
    for i in 1..=p.layers() {
        let cols = p.layer_columns(i);
        if cols.is_empty() || !is_connected_polyomino(&cols) {
            layers_convex = false;
            failures.push(format!("layer {i} is not a connected polyomino"));
        } else if !is_orthogonally_convex(&cols) {
            layers_convex = false;
            failures.push(format!("layer {i} is not orthogonally convex"));
        }
    }
    let report = ValidationReport {
        face_connected,
        manifold,
        vertices: v,
        edges: e,
        faces: f,
        euler,
        genus_zero,
        layers_convex,
        failures,
    };
    (report, surface)
}

/// The band cell facing `a` across the interior of its layer.
pub fn opposite_cell(s: &Surface, a: CellId) -> Result<CellId, ModelError> {
    let cell = s.cell(a);
    if cell.kind != CellKind::Band {
        return Err(ModelError::Internal(format!("cell {a} is not a band cell")));
    }
    let back = cell.normal.neg();
    let mut cube = cell.cube;
    loop {
        if let Some(id) = s.find(cube, back) {
            return Ok(id);
        }
        cube = add(cube, back.vec());
        if cube.iter().any(|&v| !(-1..=i32::MAX - 1).contains(&v)) {
            break;
        }
    }
    Err(ModelError::Internal(format!("no opposite cell for {a}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube() -> Polycube {
        load_voxels("0 0 0").unwrap()
    }

    #[test]
    fn parses_coordinate_lines() {
        let p = load_voxels("0 0 0\n0 0 1 # top\n").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.layers(), 2);
        assert!(p.contains([0, 0, 1]));
    }

    #[test]
    fn translates_to_origin() {
        let p = load_voxels("5 -3 7\n").unwrap();
        assert_eq!(p.cubes().copied().collect::<Vec<_>>(), vec![[0, 0, 0]]);
    }

    #[test]
    fn parses_ascii_layers() {
        let p = load_voxels("##\n#.\n\n#.\n#.\n").unwrap();
        assert_eq!(p.layer_columns(1).len(), 3);
        assert_eq!(p.layer_columns(2).len(), 2);
        assert!(p.contains([1, 0, 0]));
        assert!(!p.contains([1, 1, 0]));
        assert!(p.contains([0, 1, 1]));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(load_voxels("0 0"), Err(ModelError::Parse { line: 1, .. })));
        assert!(matches!(load_voxels("# c\n0 0 x"), Err(ModelError::Parse { line: 2, .. })));
        assert_eq!(load_voxels("# nothing\n\n"), Err(ModelError::Empty));
        assert_eq!(load_voxels(""), Err(ModelError::Empty));
    }

    #[test]
    fn unit_cube_counts() {
        let s = extract_surface(&cube()).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.euler_counts(), (8, 12, 6));
        assert_eq!(s.euler_characteristic(), 2);
        assert_eq!(s.band_cells(1).count(), 4);
        assert_eq!(s.top_cells(1).count(), 1);
        assert_eq!(s.bottom_cells(1).count(), 1);
        let r = validate(&cube());
        assert!(r.ok());
        assert_eq!((r.vertices, r.edges, r.faces, r.euler), (8, 12, 6, 2));
    }

    #[test]
    fn tower_and_slab_counts() {
        let t = extract_surface(&load_voxels("0 0 0\n0 0 1").unwrap()).unwrap();
        assert_eq!(t.len(), 10);
        assert_eq!(t.cells().iter().filter(|c| c.kind == CellKind::Band).count(), 8);
        let slab = extract_surface(&load_voxels("##\n##").unwrap()).unwrap();
        assert_eq!(slab.len(), 16);
        assert_eq!(slab.top_cells(1).count(), 4);
        assert_eq!(slab.bottom_cells(1).count(), 4);
    }

    #[test]
    fn ids_follow_lexicographic_order() {
        let s = extract_surface(&load_voxels("##\n##\n\n#.\n..").unwrap()).unwrap();
        let keys: Vec<_> = s
            .cells()
            .iter()
            .map(|c| {
                let b = c.base();
                (b[2], b[1], b[0], c.normal)
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn ring_is_a_torus() {
        let r = validate(&load_voxels("###\n#.#\n###").unwrap());
        assert_eq!(r.euler, 0);
        assert!(!r.genus_zero);
        assert!(r.face_connected && r.manifold);
        assert!(!r.layers_convex);
    }

    #[test]
    fn u_shape_is_not_convex() {
        let p = Polycube::new([[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0], [2, 1, 0]]).unwrap();
        let r = validate(&p);
        assert!(r.face_connected && r.manifold && r.genus_zero);
        assert!(!r.layers_convex);
    }

    #[test]
    fn vertex_and_edge_contacts_are_rejected() {
        let v = Polycube::new([[0, 0, 0], [1, 1, 1]]).unwrap();
        assert!(matches!(extract_surface(&v), Err(ModelError::NonManifold(_))));
        let e = Polycube::new([[0, 0, 0], [1, 1, 0]]).unwrap();
        assert!(matches!(extract_surface(&e), Err(ModelError::NonManifold(_))));
        // face-connected, but (0,0,0) and (1,1,1) meet at a single vertex
        let pinch = Polycube::new([
            [0, 1, 0],
            [0, 0, 0],
            [1, 0, 0],
            [2, 0, 0],
            [2, 1, 0],
            [2, 2, 0],
            [2, 2, 1],
            [1, 2, 1],
        ])
        .unwrap();
        let r = validate(&pinch);
        assert!(r.face_connected);
        assert!(!r.manifold);
    }

    #[test]
    fn adjacency_is_symmetric() {
        let s = extract_surface(&load_voxels("##.\n.##\n\n.#.\n.#.").unwrap()).unwrap();
        for c in s.cells() {
            for k in 0..4 {
                let (n, kn) = s.neighbor(c.id, k);
                assert_eq!(s.neighbor(n, kn), (c.id, k));
            }
        }
    }

    /// Brute-force: scan the whole layer slab behind `a` for parallel cells
    /// facing the opposite way.
    fn opposite_by_scan(s: &Surface, a: CellId) -> Vec<CellId> {
        let ca = s.cell(a);
        let axis = ca.normal.axis();
        let other = 1 - axis;
        s.cells()
            .iter()
            .filter(|c| {
                c.kind == CellKind::Band
                    && c.band() == ca.band()
                    && c.normal == ca.normal.neg()
                    && c.cube[other] == ca.cube[other]
            })
            .map(|c| c.id)
            .collect()
    }

    #[test]
    fn opposite_matches_scan_and_is_involution() {
        let p = load_voxels("##.\n.##\n\n.#.\n.#.").unwrap();
        let s = extract_surface(&p).unwrap();
        for c in s.cells().iter().filter(|c| c.kind == CellKind::Band) {
            let o = opposite_cell(&s, c.id).unwrap();
            assert_eq!(opposite_by_scan(&s, c.id), vec![o]);
            assert_eq!(opposite_cell(&s, o).unwrap(), c.id);
        }
    }

    #[test]
    fn staircase_opposite() {
        let p = Polycube::new([[0, 0, 0], [1, 0, 0], [1, 1, 0], [2, 1, 0]]).unwrap();
        let s = extract_surface(&p).unwrap();
        let a = s.find([1, 0, 0], Dir::NegY).unwrap();
        let b = s.find([1, 1, 0], Dir::PosY).unwrap();
        assert_eq!(opposite_by_scan(&s, a), vec![b]);
        assert_eq!(opposite_cell(&s, a).unwrap(), b);
        let front = s.find([0, 0, 0], Dir::PosY).unwrap();
        assert_eq!(opposite_cell(&s, front).unwrap(), s.find([0, 0, 0], Dir::NegY).unwrap());
        assert!(opposite_cell(&s, s.find([0, 0, 0], Dir::PosZ).unwrap()).is_err());
    }

    #[test]
    fn exposed_faces_match_surface() {
        let p = load_voxels("###\n.#.\n\n.#.\n.#.\n\n.#.\n...").unwrap();
        assert_eq!(extract_surface(&p).unwrap().len(), p.exposed_faces());
    }
}
