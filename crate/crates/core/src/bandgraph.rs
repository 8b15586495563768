//! Band cycles, beams, clips and the per-layer choice of `L_i`, `R_i` and bridges.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{invariant, Error, Result};
use crate::geom::{dot, Dir, Turn};
use crate::model::{CellId, CellKind, Surface};

/// Band cells of one layer in counterclockwise order (viewed from +z).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandCycle {
    pub layer: usize,
    cells: Vec<CellId>,
    pos: HashMap<CellId, usize>,
}

impl BandCycle {
    pub fn cells(&self) -> &[CellId] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: CellId) -> bool {
        self.pos.contains_key(&c)
    }

    pub fn index_of(&self, c: CellId) -> Option<usize> {
        self.pos.get(&c).copied()
    }

    pub fn next(&self, c: CellId, turn: Turn) -> CellId {
        let n = self.cells.len();
        let k = self.pos[&c];
        match turn {
            Turn::Ccw => self.cells[(k + 1) % n],
            Turn::Cw => self.cells[(k + n - 1) % n],
        }
    }

    pub fn prev(&self, c: CellId, turn: Turn) -> CellId {
        self.next(c, turn.flip())
    }

    /// Closed walk `[from, to]` in direction `turn`.
    pub fn walk(&self, from: CellId, to: CellId, turn: Turn) -> Vec<CellId> {
        let mut out = vec![from];
        let mut c = from;
        while c != to {
            c = self.next(c, turn);
            out.push(c);
        }
        out
    }

    /// Open walk `(from, to)`; empty when `to` follows `from` directly.
    pub fn open(&self, from: CellId, to: CellId, turn: Turn) -> Vec<CellId> {
        if from == to {
            let mut w = self.walk(self.next(from, turn), from, turn);
            w.pop();
            return w;
        }
        let mut w = self.walk(from, to, turn);
        w.remove(0);
        w.pop();
        w
    }
}

pub fn band_cycle(s: &Surface, i: usize) -> Result<BandCycle> {
    let all: BTreeSet<CellId> = s.band_cells(i).collect();
    let Some(&start) = all.iter().next() else {
        return invariant(format!("layer {i} has no band cells"));
    };
    let mut cells = vec![start];
    let mut c = start;
    loop {
        let (n, _) = s.neighbor(c, 0);
        if n == start {
            break;
        }
        if !all.contains(&n) || cells.len() > all.len() {
            return invariant(format!("band {i} does not close up at cell {c}"));
        }
        cells.push(n);
        c = n;
    }
    if cells.len() != all.len() {
        return invariant(format!("band {i} splits into several cycles"));
    }
    let pos = cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    Ok(BandCycle { layer: i, cells, pos })
}

/// A one-cell-wide strip of coplanar horizontal cells between two band anchors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Beam {
    pub plane: usize,
    /// Ordered from `anchors.0` to `anchors.1`.
    pub cells: Vec<CellId>,
    pub anchors: (CellId, CellId),
    /// Axis the strip runs along (0 = x, 1 = y).
    pub axis: usize,
}

impl Beam {
    pub fn contains(&self, c: CellId) -> bool {
        self.cells.contains(&c)
    }

    pub fn kind(&self, s: &Surface) -> CellKind {
        s.cell(self.cells[0]).kind
    }

    pub fn is_top(&self, s: &Surface) -> bool {
        self.kind(s) == CellKind::Top
    }

    pub fn other_anchor(&self, a: CellId) -> CellId {
        if self.anchors.0 == a {
            self.anchors.1
        } else {
            self.anchors.0
        }
    }

    pub fn has_anchor(&self, a: CellId) -> bool {
        self.anchors.0 == a || self.anchors.1 == a
    }

    /// Smallest cell id; identifies the beam independently of direction.
    pub fn key(&self) -> CellId {
        *self.cells.iter().min().expect("beams are non-empty")
    }

    pub fn same(&self, other: &Beam) -> bool {
        self.key() == other.key()
    }
}

/// Beam starting at edge `k` (1 = top, 3 = bottom) of band cell `a`; `None` when empty.
pub fn beam_from_edge(s: &Surface, a: CellId, k: u8) -> Result<Option<Beam>> {
    if !s.is_band(a) {
        return Err(Error::Invariant(format!("cell {a} is not a band cell")));
    }
    let (first, back) = s.neighbor(a, k);
    if s.is_band(first) {
        return Ok(None);
    }
    let fc = s.cell(first);
    let d = fc.normal.edge_dir(back).neg();
    let mut cells = vec![first];
    let mut c = first;
    loop {
        let n = s.neighbor_toward(c, d).expect("horizontal cell has horizontal edges");
        if s.is_band(n) {
            let plane = fc.plane();
            return Ok(Some(Beam { plane, cells, anchors: (a, n), axis: d.axis() }));
        }
        cells.push(n);
        c = n;
    }
}

/// `plane`-beam of band cell `a`: top edge when `a` is on band `plane`, bottom edge when on band `plane + 1`.
pub fn beam_of(s: &Surface, a: CellId, plane: usize) -> Result<Option<Beam>> {
    let band = s.cell(a).band();
    if band == plane {
        beam_from_edge(s, a, 1)
    } else if band == plane + 1 {
        beam_from_edge(s, a, 3)
    } else {
        invariant(format!("cell {a} on band {band} has no {plane}-beam"))
    }
}

/// Beam through a horizontal cell `c` along `axis`.
pub fn beam_through(s: &Surface, c: CellId, axis: usize) -> Beam {
    let cell = s.cell(c);
    let (dneg, dpos) = if axis == 0 { (Dir::NegX, Dir::PosX) } else { (Dir::NegY, Dir::PosY) };
    let mut start = c;
    let anchor0 = loop {
        let n = s.neighbor_toward(start, dneg).expect("horizontal edge");
        if s.is_band(n) {
            break n;
        }
        start = n;
    };
    let mut cells = vec![start];
    let mut cur = start;
    let anchor1 = loop {
        let n = s.neighbor_toward(cur, dpos).expect("horizontal edge");
        if s.is_band(n) {
            break n;
        }
        cells.push(n);
        cur = n;
    };
    Beam { plane: cell.plane(), cells, anchors: (anchor0, anchor1), axis }
}

/// Partition horizontal cells into maximal beams along `axis`, ordered by smallest member.
pub fn partition(s: &Surface, cells: &BTreeSet<CellId>, axis: usize) -> Vec<Beam> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &c in cells {
        if seen.contains(&c) {
            continue;
        }
        let b = beam_through(s, c, axis);
        seen.extend(b.cells.iter().copied());
        out.push(b);
    }
    out
}

/// Column coordinate of a horizontal cell along direction `h`.
fn column(s: &Surface, c: CellId, h: Dir) -> i32 {
    dot(s.cell(c).cube, h.vec())
}

/// `i`-clip of band cell `r` for pointer `turn`; empty when the `i`-beam is empty.
pub fn clip_of(s: &Surface, r: CellId, turn: Turn) -> Result<BTreeSet<CellId>> {
    let i = s.cell(r).band();
    let Some(beam) = beam_of(s, r, i)? else {
        return Ok(BTreeSet::new());
    };
    let h = turn.heading(s.cell(r).normal);
    let base = column(s, beam.cells[0], h);
    let normal = s.cell(beam.cells[0]).normal;
    let mut seen: BTreeSet<CellId> = beam.cells.iter().copied().collect();
    let mut queue: VecDeque<CellId> = beam.cells.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        for k in 0..4 {
            let (n, _) = s.neighbor(x, k);
            if s.cell(n).normal == normal && column(s, n, h) >= base && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    Ok(seen)
}

/// Band cells edge-adjacent to a set of horizontal cells.
fn band_neighbors(s: &Surface, cells: &BTreeSet<CellId>) -> BTreeSet<CellId> {
    let mut out = BTreeSet::new();
    for &c in cells {
        for k in 0..4 {
            let (n, _) = s.neighbor(c, k);
            if s.is_band(n) {
                out.insert(n);
            }
        }
    }
    out
}

fn parallel(s: &Surface, a: CellId, b: CellId) -> bool {
    s.cell(a).normal.axis() == s.cell(b).normal.axis()
}

/// Selection criterion for `R_i`: clip empty or touching a parallel `(i+1)`-band cell.
fn is_right_candidate(s: &Surface, r: CellId, turn: Turn) -> Result<bool> {
    let clip = clip_of(s, r, turn)?;
    if clip.is_empty() {
        return Ok(true);
    }
    Ok(!next_left_candidates(s, r, &clip, turn)?.is_empty())
}

/// Parallel `(i+1)`-band cells over the clip, keyed by column offset, distance to `r` and id.
///
/// A candidate is kept only when its beam can be reached from `beam(r)` by stacking
/// edge-adjacent beams across the clip.
fn next_left_candidates(s: &Surface, r: CellId, clip: &BTreeSet<CellId>, turn: Turn) -> Result<Vec<(i32, i32, CellId)>> {
    let i = s.cell(r).band();
    let first = beam_of(s, r, i)?.expect("non-empty clip has a beam");
    let h = turn.heading(s.cell(r).normal);
    let c0 = column(s, first.cells[0], h);
    let rc = s.cell(r).center2();
    let mut out = Vec::new();
    for b in band_neighbors(s, clip) {
        if s.cell(b).band() != i + 1 || !parallel(s, b, r) {
            continue;
        }
        let (below, _) = s.neighbor(b, 3);
        if !clip.contains(&below) {
            continue;
        }
        let cols = column(s, below, h) - c0;
        if cols == 0 && !beam_of(s, b, i)?.is_some_and(|bb| bb.same(&first)) {
            continue;
        }
        let bc = s.cell(b).center2();
        let dist = (0..3).map(|k| (bc[k] - rc[k]).abs()).sum::<i32>();
        let stacked = bridge_between(s, r, b, clip, turn).is_ok_and(|beams| {
            beams.windows(2).all(|w| {
                w[0].cells.iter().any(|&x| w[1].cells.iter().any(|&y| s.shared_edge(x, y).is_some()))
            })
        });
        if stacked {
            out.push((cols, dist, b));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Per-layer choice of visited band segment and bridge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandSelection {
    pub layer: usize,
    pub left: CellId,
    pub right: CellId,
    pub turn: Turn,
    /// Closed walk from `left` to `right`.
    pub visited: Vec<CellId>,
    /// Beams from `beam(right)` to `beam(next_left)`, in that order.
    pub bridge: Vec<Beam>,
    pub quasi_adjacent: bool,
    pub next_left: Option<CellId>,
    pub next_turn: Option<Turn>,
}

impl BandSelection {
    pub fn is_visited(&self, c: CellId) -> bool {
        self.visited.contains(&c)
    }

    /// Position of `c` in the visited walk.
    pub fn visit_rank(&self, c: CellId) -> Option<usize> {
        self.visited.iter().position(|&x| x == c)
    }

    pub fn bridge_cells(&self) -> BTreeSet<CellId> {
        self.bridge.iter().flat_map(|b| b.cells.iter().copied()).collect()
    }
}

/// All layer selections plus the band cycles they refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selections {
    pub cycles: Vec<BandCycle>,
    pub layers: Vec<BandSelection>,
}

impl Selections {
    /// Selection of layer `i` (1-based).
    pub fn layer(&self, i: usize) -> &BandSelection {
        &self.layers[i - 1]
    }

    pub fn cycle(&self, i: usize) -> &BandCycle {
        &self.cycles[i - 1]
    }

    pub fn m(&self) -> usize {
        self.layers.len()
    }

    /// Whether band cell `c` lies on its layer's visited segment.
    pub fn is_visited(&self, s: &Surface, c: CellId) -> bool {
        self.layer(s.cell(c).band()).is_visited(c)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for sel in &self.layers {
            let _ = writeln!(
                out,
                "layer {} L {} R {} dir {} visited {} bridge {} quasi {}",
                sel.layer,
                sel.left,
                sel.right,
                sel.turn,
                sel.visited.len(),
                sel.bridge.len(),
                sel.quasi_adjacent
            );
        }
        out
    }
}

/// Whether the open segment `band(r, l)` plus `l` is one straight run and `l` is orthogonal to `r`.
pub fn quasi_adjacent(s: &Surface, cyc: &BandCycle, l: CellId, r: CellId, turn: Turn) -> bool {
    if parallel(s, l, r) {
        return false;
    }
    let n = s.cell(l).normal;
    cyc.open(r, l, turn).into_iter().all(|c| s.cell(c).normal == n)
}

fn bridge_between(
    s: &Surface,
    r: CellId,
    l_next: CellId,
    clip: &BTreeSet<CellId>,
    turn: Turn,
) -> Result<Vec<Beam>> {
    let i = s.cell(r).band();
    let first = beam_of(s, r, i)?.expect("non-empty clip has a beam");
    let last = match beam_of(s, l_next, i)? {
        Some(b) => b,
        None => return invariant(format!("L_{} = {l_next} has an empty beam", i + 1)),
    };
    let h = turn.heading(s.cell(r).normal);
    let c0 = column(s, first.cells[0], h);
    let c1 = column(s, last.cells[0], h);
    if c1 < c0 {
        return invariant(format!("bridge of layer {i} runs against the pointer"));
    }
    if c0 == c1 {
        if !first.same(&last) {
            return invariant(format!("layer {i}: beams of R and next L share a column but differ"));
        }
        return Ok(vec![first]);
    }
    let axis = first.axis;
    let mut out = vec![first];
    for col in c0 + 1..c1 {
        let in_col: BTreeSet<CellId> = clip.iter().copied().filter(|&c| column(s, c, h) == col).collect();
        let runs = partition(s, &in_col, axis);
        let runs: Vec<Beam> = runs.into_iter().filter(|b| b.cells.iter().all(|c| in_col.contains(c))).collect();
        if runs.len() != 1 {
            return invariant(format!("layer {i}: bridge column {col} holds {} beams", runs.len()));
        }
        out.extend(runs);
    }
    out.push(last);
    Ok(out)
}

/// `L_{i+1}` among parallel `(i+1)`-band cells touching the clip.
fn choose_next_left(s: &Surface, r: CellId, clip: &BTreeSet<CellId>, turn: Turn) -> Result<CellId> {
    match next_left_candidates(s, r, clip, turn)?.first() {
        Some(&(_, _, b)) => Ok(b),
        None => invariant(format!("layer {}: no L_{} candidate touches the clip of {r}", s.cell(r).band(), s.cell(r).band() + 1)),
    }
}

fn finish_layer(s: &Surface, cyc: &BandCycle, left: CellId, right: CellId, turn: Turn) -> Result<BandSelection> {
    let i = cyc.layer;
    let m = s.layers();
    let visited = cyc.walk(left, right, turn);
    let quasi = quasi_adjacent(s, cyc, left, right, turn);
    if i == m {
        return Ok(BandSelection {
            layer: i,
            left,
            right,
            turn,
            visited,
            bridge: Vec::new(),
            quasi_adjacent: quasi,
            next_left: None,
            next_turn: None,
        });
    }
    let clip = clip_of(s, right, turn)?;
    let (next_left, bridge) = if clip.is_empty() {
        let (up, _) = s.neighbor(right, 1);
        (up, Vec::new())
    } else {
        let nl = choose_next_left(s, right, &clip, turn)?;
        let bridge = bridge_between(s, right, nl, &clip, turn)?;
        (nl, bridge)
    };
    let next_turn = if s.cell(right).normal == s.cell(next_left).normal { turn } else { turn.flip() };
    Ok(BandSelection {
        layer: i,
        left,
        right,
        turn,
        visited,
        bridge,
        quasi_adjacent: quasi,
        next_left: Some(next_left),
        next_turn: Some(next_turn),
    })
}

fn select_first(s: &Surface, cyc: &BandCycle) -> Result<BandSelection> {
    let m = s.layers();
    let turn = Turn::Ccw;
    if m >= 2 {
        // A fully covered first layer has only faces on the bottom of layer 2 in its plane.
        if let Some(top) = s.top_cells(1).min().or_else(|| s.bottom_cells(2).min()) {
            let face = s.face_of(top);
            for &r in cyc.cells().iter().collect::<BTreeSet<_>>() {
                let Some(beam) = beam_of(s, r, 1)? else { continue };
                if !face.contains(&beam.cells[0]) || s.cell(beam.anchors.1).band() != 2 {
                    continue;
                }
                let left = cyc.next(r, turn);
                return Ok(BandSelection {
                    layer: 1,
                    left,
                    right: r,
                    turn,
                    visited: cyc.walk(left, r, turn),
                    bridge: vec![beam.clone()],
                    quasi_adjacent: quasi_adjacent(s, cyc, left, r, turn),
                    next_left: Some(beam.anchors.1),
                    next_turn: Some(Turn::Ccw),
                });
            }
            return invariant("top 1-face has no beam spanning from band 1 to band 2");
        }
    }
    let mut ids: Vec<CellId> = cyc.cells().to_vec();
    ids.sort_unstable();
    for r in ids {
        if m == 1 || is_right_candidate(s, r, turn)? {
            let left = cyc.next(r, turn);
            return finish_layer(s, cyc, left, r, turn);
        }
    }
    invariant("no candidate for R_1")
}

fn select_layer(s: &Surface, cyc: &BandCycle, left: CellId, turn: Turn) -> Result<BandSelection> {
    let i = cyc.layer;
    if i == s.layers() {
        let right = cyc.prev(left, turn);
        return finish_layer(s, cyc, left, right, turn);
    }
    // R_i is the last candidate on the walk, so scan it backwards.
    let mut right = None;
    for c in cyc.walk(left, cyc.prev(left, turn), turn).into_iter().rev() {
        if is_right_candidate(s, c, turn)? {
            right = Some(c);
            break;
        }
    }
    match right {
        Some(r) => finish_layer(s, cyc, left, r, turn),
        None => invariant(format!("layer {i}: no cell qualifies as R_{i}")),
    }
}

/// Band selections for every layer, bottom to top.
pub fn select_all(s: &Surface) -> Result<Selections> {
    let m = s.layers();
    let cycles = (1..=m).map(|i| band_cycle(s, i)).collect::<Result<Vec<_>>>()?;
    let mut layers: Vec<BandSelection> = Vec::with_capacity(m);
    for i in 1..=m {
        let sel = if i == 1 {
            select_first(s, &cycles[0])?
        } else {
            let prev = &layers[i - 2];
            let (Some(l), Some(t)) = (prev.next_left, prev.next_turn) else {
                return invariant(format!("layer {} left no successor", i - 1));
            };
            if !cycles[i - 1].contains(l) {
                return invariant(format!("L_{i} = {l} is not on band {i}"));
            }
            select_layer(s, &cycles[i - 1], l, t)?
        };
        layers.push(sel);
    }
    Ok(Selections { cycles, layers })
}

/// Violations of the structural claims about one selection set; empty when all hold.
pub fn selection_oracles(s: &Surface, sels: &Selections) -> Vec<String> {
    let mut out = Vec::new();
    for sel in &sels.layers {
        let i = sel.layer;
        let cyc = sels.cycle(i);
        let unvisited: Vec<CellId> = cyc.cells().iter().copied().filter(|&c| !sel.is_visited(c)).collect();
        // clip and beam of unvisited cells: non-empty, on top, away from parallel upper band
        for &r in &unvisited {
            let clip = match clip_of(s, r, sel.turn) {
                Ok(c) => c,
                Err(e) => {
                    out.push(format!("layer {i}: clip of {r}: {e}"));
                    continue;
                }
            };
            if clip.is_empty() {
                out.push(format!("unvisited clip: layer {i} unvisited {r} has an empty clip"));
                continue;
            }
            if clip.iter().any(|&c| s.cell(c).kind != CellKind::Top) {
                out.push(format!("unvisited clip: layer {i} clip of unvisited {r} is not on top"));
            }
            if band_neighbors(s, &clip).into_iter().any(|b| s.cell(b).band() == i + 1 && parallel(s, b, r)) {
                out.push(format!("unvisited clip: layer {i} clip of unvisited {r} touches a parallel upper band cell"));
            }
        }
        // unvisited cells parallel to R have a beam with a visited anchor on the same band
        for &u in unvisited.iter().filter(|&&u| parallel(s, u, sel.right)) {
            match beam_of(s, u, i) {
                Ok(Some(b)) => {
                    let w = b.other_anchor(u);
                    if !b.is_top(s) || s.cell(w).band() != i || !sel.is_visited(w) {
                        out.push(format!("unvisited beam: layer {i} unvisited {u} beam anchor {w} is not a visited band cell"));
                    }
                }
                _ => out.push(format!("unvisited beam: layer {i} unvisited {u} has no beam")),
            }
        }
        let rn = s.cell(sel.right).normal;
        for &u in &unvisited {
            if s.cell(u).normal == rn.neg() {
                out.push(format!("unvisited side: layer {i} cell {u} faces away from R and is unvisited"));
            }
        }
        if s.cell(sel.left).normal == rn.neg() {
            if let Ok(o) = crate::model::opposite_cell(s, sel.right) {
                if o == sel.left {
                    out.push(format!("unvisited side: layer {i} L lies opposite R"));
                }
            }
        }
        if sel.bridge.len() > 1 && unvisited.iter().any(|&u| parallel(s, u, sel.right)) {
            out.push(format!("bridge width: layer {i} multi-beam bridge with unvisited cells parallel to R"));
        }
        if !sel.bridge.is_empty() {
            let cells = sel.bridge_cells();
            let cols: BTreeSet<(i32, i32)> = cells.iter().map(|&c| (s.cell(c).cube[0], s.cell(c).cube[1])).collect();
            if !crate::model::is_connected_polyomino(&cols) || !crate::model::is_orthogonally_convex(&cols) {
                out.push(format!("bridge shape: layer {i} bridge is not a connected orthoconvex region"));
            }
            if !sel.bridge[0].is_top(s) && sel.bridge.len() != 1 {
                out.push(format!("layer {i}: bottom bridge has {} beams", sel.bridge.len()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{extract_surface, Polycube};

    fn surf(cubes: &[[i32; 3]]) -> Surface {
        extract_surface(&Polycube::new(cubes.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn cycle_lengths_match_perimeters() {
        assert_eq!(band_cycle(&surf(&[[0, 0, 0]]), 1).unwrap().len(), 4);
        let slab = surf(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]);
        assert_eq!(band_cycle(&slab, 1).unwrap().len(), 8);
        let tromino = surf(&[[0, 0, 0], [1, 0, 0], [0, 1, 0]]);
        assert_eq!(band_cycle(&tromino, 1).unwrap().len(), 8);
    }

    #[test]
    fn cycle_turns_left_when_walking_ccw() {
        let s = surf(&[[0, 0, 0], [1, 0, 0]]);
        let cyc = band_cycle(&s, 1).unwrap();
        for &c in cyc.cells() {
            let n = cyc.next(c, Turn::Ccw);
            let (a, b) = (s.cell(c).normal, s.cell(n).normal);
            assert!(a == b || b == a.ccw(), "{a} -> {b}");
        }
    }

    #[test]
    fn unit_cube_beam_reaches_opposite() {
        let s = surf(&[[0, 0, 0]]);
        let f = s.find([0, 0, 0], Dir::NegY).unwrap();
        let b = beam_of(&s, f, 1).unwrap().unwrap();
        assert_eq!(b.cells.len(), 1);
        assert_eq!(b.anchors.1, s.find([0, 0, 0], Dir::PosY).unwrap());
        assert_eq!(clip_of(&s, f, Turn::Ccw).unwrap().len(), 1);
    }

    #[test]
    fn tower_beam_is_empty() {
        let s = surf(&[[0, 0, 0], [0, 0, 1]]);
        let f = s.find([0, 0, 0], Dir::NegY).unwrap();
        assert!(beam_of(&s, f, 1).unwrap().is_none());
        assert!(clip_of(&s, f, Turn::Ccw).unwrap().is_empty());
    }

    #[test]
    fn short_side_beam_spans_slab() {
        let s = surf(&[[0, 0, 0], [1, 0, 0]]);
        let f = s.find([0, 0, 0], Dir::NegX).unwrap();
        let b = beam_of(&s, f, 1).unwrap().unwrap();
        assert_eq!(b.cells.len(), 2);
        assert_eq!(b.anchors.1, s.find([1, 0, 0], Dir::PosX).unwrap());
        assert_eq!(b.axis, 0);
    }

    #[test]
    fn unit_cube_selection_visits_whole_band() {
        let s = surf(&[[0, 0, 0]]);
        let sel = select_all(&s).unwrap();
        let l = sel.layer(1);
        assert_eq!(l.visited.len(), 4);
        assert_eq!(sel.cycle(1).next(l.right, Turn::Ccw), l.left);
        assert!(l.bridge.is_empty());
    }

    #[test]
    fn tower_selection_has_empty_bridge() {
        let s = surf(&[[0, 0, 0], [0, 0, 1]]);
        let sel = select_all(&s).unwrap();
        let l1 = sel.layer(1);
        assert!(l1.bridge.is_empty());
        assert_eq!(l1.next_turn, Some(Turn::Ccw));
        assert_eq!(s.neighbor(l1.right, 1).0, sel.layer(2).left);
        assert_eq!(sel.layer(2).visited.len(), 4);
        assert!(selection_oracles(&s, &sel).is_empty());
    }

    #[test]
    fn step_selection_uses_top_face() {
        // two cubes below, one above the left cube
        let s = surf(&[[0, 0, 0], [1, 0, 0], [0, 0, 1]]);
        let sel = select_all(&s).unwrap();
        let l1 = sel.layer(1);
        assert_eq!(l1.bridge.len(), 1);
        let b = &l1.bridge[0];
        assert_eq!(s.cell(b.anchors.1).band(), 2);
        assert_eq!(sel.layer(2).left, b.anchors.1);
        assert!(selection_oracles(&s, &sel).is_empty());
    }

    #[test]
    fn selection_is_deterministic() {
        let s = surf(&[[0, 0, 0], [1, 0, 0], [1, 1, 0], [1, 1, 1], [2, 1, 1], [1, 1, 2]]);
        assert_eq!(select_all(&s).unwrap(), select_all(&s).unwrap());
    }
}
