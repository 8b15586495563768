//! Four-stage construction of the unfolding net.
//!
//! Stage 1 lays out the visited band segments and bridges as a staircase, stage 2 hangs
//! the remaining top faces, stage 3 the bottom faces, and stage 4 places the unvisited
//! band segments of each layer, possibly cutting and shifting part of the net.

mod props;
mod stage4;

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::bandgraph::{self, beam_of, partition, Beam, Selections};
use crate::error::{invariant, Error, Result};
use crate::model::{validate_with_surface, CellId, Polycube, Surface};
use crate::netplan::UnfoldingNet;

pub use props::{assert_net_properties, Phase};

/// Kind of net edit recorded in the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Place,
    Relocate,
    CutShift,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Place => "place",
            Op::Relocate => "relocate",
            Op::CutShift => "cutshift",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub stage: u8,
    pub layer: usize,
    /// `stage1`..`stage3`, `case1`..`case4`, `common1`..`common3` or `common4.1`..`common4.3`.
    pub label: &'static str,
    pub op: Op,
    pub cells: Vec<CellId>,
    pub hosts: Vec<CellId>,
}

/// How one unvisited band segment was handled in stage 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentCase {
    pub layer: usize,
    pub cells: Vec<CellId>,
    pub right: bool,
    pub case: u8,
    pub common: Option<&'static str>,
}

impl SegmentCase {
    pub fn label(&self) -> String {
        match self.common {
            Some(c) => format!("case{}/{c}", self.case),
            None => format!("case{}", self.case),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StageTrace {
    pub events: Vec<TraceEvent>,
    pub segments: Vec<SegmentCase>,
}

impl StageTrace {
    /// Label of the placement event that put `c` into the net.
    pub fn label_of(&self, c: CellId) -> Option<&'static str> {
        self.events.iter().find(|e| e.op == Op::Place && e.cells.contains(&c)).map(|e| e.label)
    }

    /// Number of placement events naming each cell; the root is counted once.
    pub fn placement_counts(&self, n: usize, root: CellId) -> Vec<usize> {
        let mut counts = vec![0; n];
        counts[root] += 1;
        for e in self.events.iter().filter(|e| e.op == Op::Place) {
            for &c in &e.cells {
                counts[c] += 1;
            }
        }
        counts
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let ids = |v: &[CellId]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        for e in &self.events {
            let _ = writeln!(
                out,
                "{} stage {} layer {} {} cells {} hosts {}",
                e.op.name(),
                e.stage,
                e.layer,
                e.label,
                ids(&e.cells),
                ids(&e.hosts)
            );
        }
        for g in &self.segments {
            let side = if g.right { "right" } else { "left" };
            let _ = writeln!(out, "segment layer {} {side} {} cells {}", g.layer, g.label(), ids(&g.cells));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnfoldOptions {
    /// Evaluate the net properties after stage 3 and before every stage-4 layer.
    pub check_properties: bool,
    /// Turn any recorded violation into an error.
    pub strict: bool,
}

impl Default for UnfoldOptions {
    fn default() -> Self {
        UnfoldOptions { check_properties: cfg!(debug_assertions), strict: true }
    }
}

#[derive(Debug, Clone)]
pub struct Unfolding {
    pub surface: Surface,
    pub selections: Selections,
    pub net: UnfoldingNet,
    pub trace: StageTrace,
    /// Failed property and structural checks; empty when checks are off or all hold.
    pub violations: Vec<String>,
}

impl Unfolding {
    /// Selection report, stage trace and the label of the step that placed each cell.
    pub fn explain(&self) -> String {
        let mut out = self.selections.to_text();
        out.push_str(&self.trace.to_text());
        for c in self.net.placed() {
            let _ = writeln!(out, "label {c} {}", self.trace.label_of(c).unwrap_or("root"));
        }
        out
    }
}

impl fmt::Display for Unfolding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} cells, {} layers", self.surface.len(), self.selections.m())
    }
}

pub fn unfold(p: &Polycube) -> Result<Unfolding> {
    unfold_with(p, UnfoldOptions::default())
}

pub fn unfold_with(p: &Polycube, opts: UnfoldOptions) -> Result<Unfolding> {
    let (report, surface) = validate_with_surface(p);
    let surface = match surface {
        Some(s) if report.ok() => s,
        _ => return Err(Error::Invalid(report.failures.join("; "))),
    };
    let selections = bandgraph::select_all(&surface)?;
    let mut violations = Vec::new();
    if opts.check_properties {
        violations.extend(bandgraph::selection_oracles(&surface, &selections));
    }
    let (net, trace, more) = {
        let mut b = Builder::new(&surface, &selections, opts.check_properties);
        b.run()?;
        (b.net, b.trace, b.violations)
    };
    violations.extend(more);
    let counts = trace.placement_counts(surface.len(), net.root());
    for (c, &k) in counts.iter().enumerate() {
        if k != 1 {
            violations.push(format!("cell {c} appears in {k} placement events"));
        }
    }
    if net.placed_count() != surface.len() {
        violations.push(format!("{} of {} cells placed", net.placed_count(), surface.len()));
    }
    if opts.strict && !violations.is_empty() {
        return Err(Error::Invariant(violations.join("; ")));
    }
    Ok(Unfolding { surface, selections, net, trace, violations })
}

pub(crate) struct Builder<'a> {
    pub s: &'a Surface,
    pub sels: &'a Selections,
    pub net: UnfoldingNet,
    pub trace: StageTrace,
    pub check: bool,
    pub violations: Vec<String>,
}

impl<'a> Builder<'a> {
    fn new(s: &'a Surface, sels: &'a Selections, check: bool) -> Self {
        let root = sels.layer(1).left;
        Builder { s, sels, net: UnfoldingNet::new(s.len(), root), trace: StageTrace::default(), check, violations: Vec::new() }
    }

    fn run(&mut self) -> Result<()> {
        self.stage1()?;
        for i in 1..=self.sels.m() {
            self.stage2(i)?;
        }
        for i in 1..=self.sels.m() {
            self.stage3(i)?;
        }
        if self.check {
            self.check_props(Phase::AfterStage3);
        }
        for i in 2..=self.sels.m() {
            if self.check {
                self.check_props(Phase::BeforeLayer(i));
            }
            self.stage4(i)?;
        }
        Ok(())
    }

    fn check_props(&mut self, phase: Phase) {
        match assert_net_properties(self.s, self.sels, &self.net, phase) {
            Ok(v) => self.violations.extend(v.into_iter().map(|x| format!("{phase}: {x}"))),
            Err(e) => self.violations.push(format!("{phase}: {e}")),
        }
    }

    pub(crate) fn visited(&self, c: CellId) -> bool {
        self.sels.is_visited(self.s, c)
    }

    pub(crate) fn band(&self, c: CellId) -> usize {
        self.s.cell(c).band()
    }

    pub(crate) fn beam(&self, c: CellId, plane: usize) -> Result<Option<Beam>> {
        beam_of(self.s, c, plane)
    }

    pub(crate) fn place(&mut self, stage: u8, layer: usize, label: &'static str, cells: &[CellId], hosts: &[CellId]) -> Result<()> {
        if cells.is_empty() {
            return Ok(());
        }
        self.net.attach_piece(self.s, cells, hosts)?;
        self.trace.events.push(TraceEvent { stage, layer, label, op: Op::Place, cells: cells.to_vec(), hosts: hosts.to_vec() });
        Ok(())
    }

    /// Place `cells` if they fit; the net is unchanged otherwise.
    pub(crate) fn try_place(&mut self, stage: u8, layer: usize, label: &'static str, cells: &[CellId], hosts: &[CellId]) -> Result<()> {
        self.net.try_attach_piece(self.s, cells, hosts)?;
        self.trace.events.push(TraceEvent { stage, layer, label, op: Op::Place, cells: cells.to_vec(), hosts: hosts.to_vec() });
        Ok(())
    }

    pub(crate) fn relocate(&mut self, layer: usize, label: &'static str, cells: &[CellId], hosts: &[CellId]) -> Result<()> {
        self.net.relocate(self.s, cells, hosts)?;
        self.trace.events.push(TraceEvent { stage: 4, layer, label, op: Op::Relocate, cells: cells.to_vec(), hosts: hosts.to_vec() });
        Ok(())
    }

    pub(crate) fn cut_shift(
        &mut self,
        layer: usize,
        label: &'static str,
        seam: &[(CellId, CellId)],
        piece: &[CellId],
        hosts: &[CellId],
    ) -> Result<()> {
        self.net.cut_and_shift(self.s, seam, piece, hosts)?;
        let cut: Vec<CellId> = seam.iter().flat_map(|&(a, b)| [a, b]).collect();
        self.trace.events.push(TraceEvent { stage: 4, layer, label, op: Op::CutShift, cells: cut, hosts: hosts.to_vec() });
        self.trace.events.push(TraceEvent { stage: 4, layer, label, op: Op::Place, cells: piece.to_vec(), hosts: hosts.to_vec() });
        Ok(())
    }

    /// Cell of `cells` sharing an edge with `c`.
    pub(crate) fn touching(&self, cells: &[CellId], c: CellId) -> Option<CellId> {
        cells.iter().copied().find(|&x| self.s.shared_edge(x, c).is_some())
    }

    fn check_row(&self, i: usize) -> Result<()> {
        let row = &self.sels.layer(i).visited;
        let (c0, r0) = self.net.pos(row[0])?;
        for (k, &c) in row.iter().enumerate() {
            if self.net.pos(c)? != (c0 + k as i32, r0) {
                return invariant(format!("visited segment of layer {i} does not run rightward at cell {c}"));
            }
        }
        Ok(())
    }

    fn place_row(&mut self, i: usize, host: Option<CellId>) -> Result<()> {
        let row = self.sels.layer(i).visited.clone();
        if let Some(h) = host {
            self.place(1, i, "stage1", &row[..1], &[h])?;
        }
        self.place(1, i, "stage1", &row[1..], &row[..1])?;
        self.check_row(i)
    }

    fn stage1(&mut self) -> Result<()> {
        self.place_row(1, None)?;
        for i in 1..self.sels.m() {
            let sel = self.sels.layer(i);
            let Some(nl) = sel.next_left else {
                return invariant(format!("layer {i} has no successor"));
            };
            let host = if sel.bridge.is_empty() {
                sel.right
            } else {
                let cells: Vec<CellId> = sel.bridge.iter().flat_map(|b| b.cells.iter().copied()).collect();
                self.place(1, i, "stage1", &cells, &[sel.right])?;
                match self.touching(&cells, nl) {
                    Some(h) => h,
                    None => return invariant(format!("bridge of layer {i} does not reach L_{}", i + 1)),
                }
            };
            self.place_row(i + 1, Some(host))?;
        }
        Ok(())
    }

    /// Visited anchor of `i`-band placed later in the walk.
    fn second_visited(&self, i: usize, a: CellId, b: CellId) -> CellId {
        let sel = self.sels.layer(i);
        if sel.visit_rank(a) > sel.visit_rank(b) {
            a
        } else {
            b
        }
    }

    fn stage2(&mut self, i: usize) -> Result<()> {
        let sel = self.sels.layer(i);
        let axis = self.s.cell(sel.right).normal.axis();
        let tops: BTreeSet<CellId> = self.s.top_cells(i).collect();
        let bridge = sel.bridge_cells();
        for beam in partition(self.s, &tops, axis) {
            if beam.cells.iter().any(|c| bridge.contains(c)) {
                continue;
            }
            let (a0, a1) = beam.anchors;
            let vis = |x: CellId| self.band(x) == i && self.visited(x);
            match (vis(a0), vis(a1)) {
                (true, true) => {
                    let host = if beam.has_anchor(sel.left) { sel.left } else { self.second_visited(i, a0, a1) };
                    self.place(2, i, "stage2", &beam.cells, &[host])?;
                }
                (true, false) | (false, true) => {
                    let (r, q) = if vis(a0) { (a0, a1) } else { (a1, a0) };
                    self.place(2, i, "stage2", &beam.cells, &[r])?;
                    // An unvisited cell of a quasi-adjacent layer above can only hang here.
                    let upper_quasi = i < self.sels.m() && self.sels.layer(i + 1).quasi_adjacent;
                    let hangs = self.band(q) == i || (self.band(q) == i + 1 && upper_quasi);
                    if hangs && self.s.is_band(q) && !self.visited(q) && !self.net.is_placed(q) {
                        self.place(2, i, "stage2", &[q], &beam.cells)?;
                    }
                }
                (false, false) => {
                    return invariant(format!("layer {i}: top beam {:?} has no visited anchor", beam.cells));
                }
            }
        }
        Ok(())
    }

    fn stage3(&mut self, i: usize) -> Result<()> {
        let sel = self.sels.layer(i);
        let quasi = sel.quasi_adjacent;
        let axis = if quasi { self.s.cell(sel.left).normal.axis() } else { self.s.cell(sel.right).normal.axis() };
        let bottoms: BTreeSet<CellId> = self.s.bottom_cells(i).collect();
        let below: BTreeSet<CellId> = if i > 1 { self.sels.layer(i - 1).bridge_cells() } else { BTreeSet::new() };
        for beam in partition(self.s, &bottoms, axis) {
            if beam.cells.iter().all(|c| !below.contains(c)) {
                self.stage3_beam(i, &beam, quasi)?;
                continue;
            }
            let mut runs: Vec<Vec<CellId>> = vec![Vec::new()];
            for &c in &beam.cells {
                if below.contains(&c) {
                    runs.push(Vec::new());
                } else {
                    runs.last_mut().expect("non-empty").push(c);
                }
            }
            let first = beam.cells[0];
            let last = *beam.cells.last().expect("non-empty");
            for run in runs.into_iter().filter(|r| !r.is_empty()) {
                let host = if run.contains(&first) {
                    beam.anchors.0
                } else if run.contains(&last) {
                    beam.anchors.1
                } else {
                    return invariant(format!("layer {i}: bottom beam {:?} is crossed twice by the bridge", beam.cells));
                };
                self.place(3, i, "stage3", &run, &[host])?;
            }
        }
        if quasi {
            for &u in self.sels.cycle(i).cells() {
                if self.visited(u) || self.net.is_placed(u) {
                    continue;
                }
                let (v, _) = self.s.neighbor(u, 3);
                if self.s.is_band(v) {
                    self.place(3, i, "stage3", &[u], &[v])?;
                }
            }
        }
        Ok(())
    }

    fn stage3_beam(&mut self, i: usize, beam: &Beam, quasi: bool) -> Result<()> {
        let (a0, a1) = beam.anchors;
        let on = |x: CellId| self.band(x) == i;
        let vis = |x: CellId| on(x) && self.visited(x);
        let fail = || invariant(format!("layer {i}: bottom beam {:?} has no usable anchor", beam.cells));
        if quasi {
            match (on(a0), on(a1)) {
                (true, true) => match (vis(a0), vis(a1)) {
                    (true, true) => self.place(3, i, "stage3", &beam.cells, &[self.second_visited(i, a0, a1)]),
                    (true, false) | (false, true) => {
                        let (r, u) = if vis(a0) { (a0, a1) } else { (a1, a0) };
                        self.place(3, i, "stage3", &beam.cells, &[r])?;
                        self.place(3, i, "stage3", &[u], &beam.cells)
                    }
                    (false, false) => fail(),
                },
                (true, false) | (false, true) => {
                    let (r, q) = if on(a0) { (a0, a1) } else { (a1, a0) };
                    if self.visited(r) {
                        self.place(3, i, "stage3", &beam.cells, &[r])
                    } else {
                        self.place(3, i, "stage3", &beam.cells, &[q])?;
                        self.place(3, i, "stage3", &[r], &beam.cells)
                    }
                }
                (false, false) => fail(),
            }
        } else {
            let unvisited: Vec<CellId> = [a0, a1].into_iter().filter(|&x| on(x) && !self.visited(x)).collect();
            let visited: Vec<CellId> = [a0, a1].into_iter().filter(|&x| vis(x)).collect();
            match (unvisited.as_slice(), visited.as_slice()) {
                ([u], _) => self.place(3, i, "stage3", &beam.cells, &[*u]),
                ([], [r]) => self.place(3, i, "stage3", &beam.cells, &[*r]),
                ([], [a, b]) => self.place(3, i, "stage3", &beam.cells, &[self.second_visited(i, *a, *b)]),
                _ => fail(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_voxels;

    fn strict(text: &str) -> Unfolding {
        let p = load_voxels(text).unwrap();
        unfold_with(&p, UnfoldOptions { check_properties: true, strict: true }).unwrap()
    }

    #[test]
    fn unit_cube_unfolds() {
        let u = strict("0 0 0");
        assert_eq!(u.net.placed_count(), 6);
        assert!(u.net.audit(&u.surface).ok());
        assert!(u.trace.segments.is_empty());
    }

    #[test]
    fn tower_unfolds() {
        let u = strict("0 0 0\n0 0 1\n0 0 2");
        assert_eq!(u.net.placed_count(), 14);
        assert!(u.net.audit(&u.surface).ok());
    }

    #[test]
    fn slab_and_step_unfold() {
        for text in ["##\n##", "##\n##\n\n#.\n..", "###\n###\n\n.#.\n.#.", "##.\n###\n\n.#.\n###"] {
            let u = strict(text);
            assert!(u.net.audit(&u.surface).ok(), "{text}");
        }
    }

    #[test]
    fn every_cell_placed_once() {
        let u = strict("##\n#.\n\n#.\n..");
        let counts = u.trace.placement_counts(u.surface.len(), u.net.root());
        assert!(counts.iter().all(|&k| k == 1));
        assert!(u.trace.label_of(u.net.root()).is_none());
    }

    #[test]
    fn rejects_invalid_input() {
        let p = load_voxels("0 0 0\n1 1 0").unwrap();
        assert!(matches!(unfold(&p), Err(Error::Invalid(_))));
    }
}
