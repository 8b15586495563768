//! Independent checks of finished nets and brute-force structural oracles.
//!
//! `verify_net` rebuilds everything it needs from the cube set and the net records:
//! exposed faces, square corners in space and in the plane, occupancy and the
//! attachment tree. It does not consult the unfolder or the net's glue graph.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::bandgraph::{self, partition};
use crate::geom::{Dir, Vec3};
use crate::model::{extract_surface, CellId, Polycube, Surface};
use crate::netplan::NetRecord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub area_ok: bool,
    pub connected_ok: bool,
    pub overlap_ok: bool,
    pub tree_ok: bool,
    pub development_ok: bool,
    pub edge_cuts_only_ok: bool,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.area_ok && self.connected_ok && self.overlap_ok && self.tree_ok && self.development_ok && self.edge_cuts_only_ok
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, v) in [
            ("area", self.area_ok),
            ("connected", self.connected_ok),
            ("overlap", self.overlap_ok),
            ("tree", self.tree_ok),
            ("development", self.development_ok),
            ("edge_cuts_only", self.edge_cuts_only_ok),
        ] {
            let _ = writeln!(out, "{name} {}", if v { "ok" } else { "FAIL" });
        }
        for f in &self.failures {
            let _ = writeln!(out, "failure {f}");
        }
        let _ = writeln!(out, "verdict {}", if self.ok() { "accepted" } else { "rejected" });
        out
    }
}

/// In-face axes `(u, v)` of the net file format; `u x v` is the outward normal.
fn frame_of(n: Dir) -> (Vec3, Vec3) {
    match n {
        Dir::PosZ => ([1, 0, 0], [0, 1, 0]),
        Dir::NegZ => ([0, 1, 0], [1, 0, 0]),
        Dir::PosX => ([0, 1, 0], [0, 0, 1]),
        Dir::NegX => ([0, -1, 0], [0, 0, 1]),
        Dir::PosY => ([-1, 0, 0], [0, 0, 1]),
        Dir::NegY => ([1, 0, 0], [0, 0, 1]),
    }
}

/// Net direction of side `k` (0: +col, 1: +row, 2: -col, 3: -row).
fn side_vec(k: u8) -> (i32, i32) {
    [(1, 0), (0, 1), (-1, 0), (0, -1)][(k & 3) as usize]
}

/// Doubled corner coordinates of a record's square, in space and in the plane, indexed by `(s, t)`.
fn corners(r: &NetRecord) -> [(Vec3, (i32, i32)); 4] {
    let nv = r.normal.vec();
    let cube: Vec3 = [0, 1, 2].map(|k| r.base[k] - nv[k].max(0));
    let c3: Vec3 = [0, 1, 2].map(|k| 2 * cube[k] + 1 + nv[k]);
    let (u, v) = frame_of(r.normal);
    let du = side_vec(r.rot);
    let dv = side_vec(r.rot + 1);
    let c2 = (2 * r.col + 1, 2 * r.row + 1);
    let mut out = [([0; 3], (0, 0)); 4];
    for (i, (s, t)) in [(-1, -1), (1, -1), (1, 1), (-1, 1)].into_iter().enumerate() {
        let p3 = [0, 1, 2].map(|k| c3[k] + s * u[k] + t * v[k]);
        let p2 = (c2.0 + s * du.0 + t * dv.0, c2.1 + s * du.1 + t * dv.1);
        out[i] = (p3, p2);
    }
    out
}

/// Check a net against a polycube from scratch.
pub fn verify_net(p: &Polycube, recs: &[NetRecord]) -> VerificationReport {
    let mut failures = Vec::new();
    let exposed: BTreeSet<(Vec3, Dir)> = p
        .cubes()
        .flat_map(|&c| Dir::ALL.into_iter().map(move |d| (c, d)))
        .filter(|&(c, d)| {
            let v = d.vec();
            !p.contains([c[0] + v[0], c[1] + v[1], c[2] + v[2]])
        })
        .collect();

    let mut faces: BTreeMap<(Vec3, Dir), CellId> = BTreeMap::new();
    let mut area_ok = recs.len() == exposed.len();
    if !area_ok {
        failures.push(format!("net has {} cells, surface area is {}", recs.len(), exposed.len()));
    }
    for r in recs {
        let nv = r.normal.vec();
        let cube: Vec3 = [0, 1, 2].map(|k| r.base[k] - nv[k].max(0));
        if !exposed.contains(&(cube, r.normal)) {
            area_ok = false;
            failures.push(format!("cell {} is not a face of the polycube", r.cell));
        }
        if let Some(o) = faces.insert((cube, r.normal), r.cell) {
            area_ok = false;
            failures.push(format!("cells {o} and {} name the same face", r.cell));
        }
    }

    let mut at: HashMap<(i32, i32), CellId> = HashMap::new();
    let mut overlap_ok = true;
    for r in recs {
        if let Some(o) = at.insert((r.col, r.row), r.cell) {
            overlap_ok = false;
            failures.push(format!("cells {o} and {} overlap at ({}, {})", r.cell, r.col, r.row));
        }
    }

    let by_id: HashMap<CellId, &NetRecord> = recs.iter().map(|r| (r.cell, r)).collect();
    let roots: Vec<CellId> = recs.iter().filter(|r| r.parent.is_none()).map(|r| r.cell).collect();
    let mut children: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    let mut dangling = false;
    for r in recs {
        if let Some(q) = r.parent {
            if !by_id.contains_key(&q) {
                dangling = true;
                failures.push(format!("cell {} names missing parent {q}", r.cell));
            }
            children.entry(q).or_default().push(r.cell);
        }
    }
    let mut order = Vec::new();
    if let [root] = roots.as_slice() {
        let mut seen = BTreeSet::from([*root]);
        let mut queue = VecDeque::from([*root]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &c in children.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(c) {
                    queue.push_back(c);
                }
            }
        }
    } else {
        failures.push(format!("{} root cells", roots.len()));
    }
    let connected_ok = !recs.is_empty() && order.len() == recs.len() && by_id.len() == recs.len();
    if !connected_ok && roots.len() == 1 {
        failures.push(format!("{} of {} cells reachable from the root", order.len(), recs.len()));
    }
    let tree_ok = connected_ok && roots.len() == 1 && !dangling;

    let mut development_ok = connected_ok;
    let mut edge_cuts_only_ok = connected_ok;
    for &c in order.iter().skip(1) {
        let rc = by_id[&c];
        let rp = by_id[&rc.parent.expect("non-root")];
        let a = corners(rc);
        let b = corners(rp);
        let shared: Vec<(usize, usize)> =
            (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|&(i, j)| a[i].0 == b[j].0).collect();
        let same_plane = shared.iter().all(|&(i, j)| a[i].1 == b[j].1);
        if shared.len() != 2 || !same_plane {
            if development_ok {
                failures.push(format!("cell {c} is not developed isometrically from parent {}", rp.cell));
            }
            development_ok = false;
        }
        let edge_ok = match rc.edge {
            Some(k) => {
                let (u, v) = frame_of(rp.normal);
                let dir = match k & 3 {
                    0 => u,
                    1 => v,
                    2 => u.map(|x| -x),
                    _ => v.map(|x| -x),
                };
                let pn = rp.normal.vec();
                let pc: Vec3 = [0, 1, 2].map(|q| 2 * (rp.base[q] - pn[q].max(0)) + 1 + pn[q]);
                let mid = [0, 1, 2].map(|q| pc[q] + dir[q]);
                shared.len() == 2 && [0, 1, 2].into_iter().all(|q| 2 * mid[q] == a[shared[0].0].0[q] + a[shared[1].0].0[q])
            }
            None => false,
        };
        if !edge_ok {
            if edge_cuts_only_ok {
                failures.push(format!("cell {c} is not hinged on a full edge of parent {}", rp.cell));
            }
            edge_cuts_only_ok = false;
        }
    }
    VerificationReport { area_ok, connected_ok, overlap_ok, tree_ok, development_ok, edge_cuts_only_ok, failures }
}

/// Horizontal faces lying on plane `i`, split by normal into connected regions.
fn faces_on_plane(s: &Surface, i: usize) -> Vec<BTreeSet<CellId>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in s.cells() {
        if s.is_band(c.id) || c.plane() != i || seen.contains(&c.id) {
            continue;
        }
        let f = s.face_of(c.id);
        seen.extend(f.iter().copied());
        out.push(f);
    }
    out
}

/// Boundary loops of a face as sequences of bordering band indices, traced edge by edge.
fn boundary_loops(s: &Surface, face: &BTreeSet<CellId>) -> Vec<Vec<usize>> {
    // directed boundary edges keyed by start point, face on the left
    let mut edges: BTreeMap<Vec3, Vec<(Vec3, usize)>> = BTreeMap::new();
    let mut total = 0;
    for &c in face {
        let cell = s.cell(c);
        for k in 0..4 {
            let (n, _) = s.neighbor(c, k);
            if face.contains(&n) {
                continue;
            }
            let (a, b) = cell.edge_ends2(k);
            let e = cell.normal.edge_dir(k).vec();
            let nv = cell.normal.vec();
            // left of direction d (viewed from outside) is n x d; face lies opposite to e
            let d = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let left = [nv[1] * d[2] - nv[2] * d[1], nv[2] * d[0] - nv[0] * d[2], nv[0] * d[1] - nv[1] * d[0]];
            let dot = left[0] * e[0] + left[1] * e[1] + left[2] * e[2];
            let (from, to) = if dot < 0 { (a, b) } else { (b, a) };
            edges.entry(from).or_default().push((to, s.cell(n).band()));
            total += 1;
        }
    }
    let mut loops = Vec::new();
    let mut used = 0;
    while used < total {
        let start = *edges.iter().find(|(_, v)| !v.is_empty()).expect("edges remain").0;
        let mut at = start;
        let mut lp = Vec::new();
        loop {
            let Some(list) = edges.get_mut(&at) else { break };
            let Some((to, band)) = list.pop() else { break };
            used += 1;
            lp.push(band);
            at = to;
            if at == start && edges.get(&at).map_or(true, |v| v.is_empty()) {
                break;
            }
        }
        loops.push(lp);
    }
    loops
}

fn cyclic_runs(v: &[usize]) -> usize {
    if v.is_empty() {
        return 0;
    }
    let changes = (0..v.len()).filter(|&k| v[k] != v[(k + 1) % v.len()]).count();
    changes.max(1)
}

/// Brute-force re-check of the structural claims about faces, beams and selections.
pub fn oracle_suite(p: &Polycube) -> Vec<String> {
    let mut out = Vec::new();
    let s = match extract_surface(p) {
        Ok(s) => s,
        Err(e) => return vec![format!("surface: {e}")],
    };
    let m = s.layers();
    for i in 0..=m {
        for face in faces_on_plane(&s, i) {
            let bands: BTreeSet<usize> = face
                .iter()
                .flat_map(|&c| (0..4).map(move |k| (c, k)))
                .map(|(c, k)| s.neighbor(c, k).0)
                .filter(|&n| s.is_band(n))
                .map(|n| s.cell(n).band())
                .collect();
            let key = face.iter().next().copied().unwrap_or_default();
            if i == 0 || i == m {
                continue;
            }
            if bands != BTreeSet::from([i, i + 1]) {
                out.push(format!("face bands: face of cell {key} on plane {i} borders bands {bands:?}"));
                continue;
            }
            let runs: usize = boundary_loops(&s, &face).iter().map(|l| cyclic_runs(l)).sum();
            if runs != 2 {
                out.push(format!("face boundary: face of cell {key} has {runs} boundary runs"));
            }
            let spans = [0, 1].into_iter().any(|axis| {
                partition(&s, &face, axis).iter().any(|b| {
                    let (x, y) = (s.cell(b.anchors.0).band(), s.cell(b.anchors.1).band());
                    x != y
                })
            });
            if !spans {
                out.push(format!("face boundary: face of cell {key} has no beam between opposite edges"));
            }
        }
    }
    for i in 1..=m {
        let cells: BTreeSet<CellId> = s.top_cells(i).chain(s.bottom_cells(i)).collect();
        for axis in [0, 1] {
            for b in partition(&s, &cells, axis) {
                if s.cell(b.anchors.0).band() != i && s.cell(b.anchors.1).band() != i {
                    out.push(format!("beam anchor: beam {:?} of layer {i} has no anchor on band {i}", b.cells));
                }
            }
        }
    }
    match bandgraph::select_all(&s) {
        Ok(sels) => out.extend(bandgraph::selection_oracles(&s, &sels)),
        Err(e) => out.push(format!("selection: {e}")),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_voxels;
    use crate::unfolder::unfold;

    #[test]
    fn unit_cube_accepted() {
        let p = load_voxels("0 0 0").unwrap();
        let u = unfold(&p).unwrap();
        let r = verify_net(&p, &u.net.records(&u.surface));
        assert!(r.ok(), "{}", r.to_text());
        assert!(oracle_suite(&p).is_empty());
    }

    #[test]
    fn swapped_cells_break_development() {
        let p = load_voxels("0 0 0\n0 0 1").unwrap();
        let u = unfold(&p).unwrap();
        let mut recs = u.net.records(&u.surface);
        let (a, b) = (3, 7);
        let (pa, pb) = ((recs[a].col, recs[a].row), (recs[b].col, recs[b].row));
        (recs[a].col, recs[a].row) = pb;
        (recs[b].col, recs[b].row) = pa;
        let r = verify_net(&p, &recs);
        assert!(!r.development_ok);
        assert!(r.overlap_ok && r.area_ok);
    }

    #[test]
    fn missing_and_duplicate_cells() {
        let p = load_voxels("0 0 0").unwrap();
        let u = unfold(&p).unwrap();
        let mut recs = u.net.records(&u.surface);
        recs.pop();
        assert!(!verify_net(&p, &recs).area_ok);
        let mut recs = u.net.records(&u.surface);
        let dup = recs[1].clone();
        recs[2].base = dup.base;
        recs[2].normal = dup.normal;
        assert!(!verify_net(&p, &recs).area_ok);
    }

    #[test]
    fn overlap_detected() {
        let p = load_voxels("0 0 0").unwrap();
        let u = unfold(&p).unwrap();
        let mut recs = u.net.records(&u.surface);
        recs[4].col = recs[5].col;
        recs[4].row = recs[5].row;
        assert!(!verify_net(&p, &recs).overlap_ok);
    }

    #[test]
    fn annulus_face_counts_two_runs() {
        let p = load_voxels("###\n###\n###\n\n...\n.#.\n...").unwrap();
        assert!(oracle_suite(&p).is_empty(), "{:?}", oracle_suite(&p));
    }
}
