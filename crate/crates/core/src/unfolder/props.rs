//! Vacancy and relocation properties of a partial net.

use std::collections::BTreeSet;
use std::fmt;

use crate::bandgraph::{beam_of, Beam, Selections};
use crate::error::Result;
use crate::model::{CellId, CellKind, Surface};
use crate::netplan::UnfoldingNet;

/// When the properties are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Every property for every layer.
    AfterStage3,
    /// The restricted set that must hold before stage 4 handles layer `i`.
    BeforeLayer(usize),
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::AfterStage3 => f.write_str("after stage 3"),
            Phase::BeforeLayer(i) => write!(f, "before layer {i}"),
        }
    }
}

struct Ctx<'a> {
    s: &'a Surface,
    sels: &'a Selections,
    net: &'a UnfoldingNet,
    out: Vec<String>,
}

/// Every square beyond `cells` on net side `side`, inside their columns or rows, is empty.
/// A strip ends early at a cell of `ignore`.
fn strip_vacant(net: &UnfoldingNet, cells: &[CellId], ignore: &[CellId], side: u8) -> Result<bool> {
    let own: BTreeSet<(i32, i32)> = cells.iter().map(|&c| net.pos(c)).collect::<Result<_>>()?;
    let skip: BTreeSet<(i32, i32)> =
        ignore.iter().filter(|&&c| net.is_placed(c)).map(|&c| net.pos(c)).collect::<Result<_>>()?;
    for &p in &own {
        let mut q = p;
        let (dx, dy) = crate::geom::net_step(side);
        let limit = net.placed_count() as i32 * 2 + 2;
        for _ in 0..limit {
            q = (q.0 + dx, q.1 + dy);
            if skip.contains(&q) {
                break;
            }
            if own.contains(&q) {
                continue;
            }
            if net.occupant(q).is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl Ctx<'_> {
    fn visited(&self, c: CellId) -> bool {
        self.sels.is_visited(self.s, c)
    }

    fn band(&self, c: CellId) -> usize {
        self.s.cell(c).band()
    }

    fn up(&self, c: CellId) -> Result<u8> {
        self.net.up_side(c)
    }

    /// Net side of "up" for layer `j`'s visited row.
    fn row_up(&self, j: usize) -> Result<u8> {
        self.up(self.sels.layer(j).left)
    }

    fn bottom_axis(&self, j: usize) -> usize {
        let sel = self.sels.layer(j);
        let c = if sel.quasi_adjacent { sel.left } else { sel.right };
        self.s.cell(c).normal.axis()
    }

    fn top_axis(&self, j: usize) -> usize {
        self.s.cell(self.sels.layer(j).right).normal.axis()
    }

    fn bridge(&self, j: usize) -> BTreeSet<CellId> {
        if j == 0 {
            BTreeSet::new()
        } else {
            self.sels.layer(j).bridge_cells()
        }
    }

    fn fail(&mut self, what: String) {
        self.out.push(what);
    }

    fn vacant(&mut self, tag: &str, cells: &[CellId], side: u8) -> Result<()> {
        self.vacant_but(tag, cells, &[], side)
    }

    fn vacant_but(&mut self, tag: &str, cells: &[CellId], ignore: &[CellId], side: u8) -> Result<()> {
        if !strip_vacant(self.net, cells, ignore, side)? {
            self.fail(format!("{tag}: {cells:?} not vacant toward side {side}"));
        }
        Ok(())
    }

    fn p1(&mut self, j: usize, only: impl Fn(CellId) -> bool) -> Result<()> {
        let sel = self.sels.layer(j);
        let below = self.bridge(j - 1);
        for &r in &sel.visited {
            if r == sel.left || !only(r) {
                continue;
            }
            let b = beam_of(self.s, r, j - 1)?;
            let in_partition = b
                .as_ref()
                .is_some_and(|b| b.kind(self.s) == CellKind::Bottom && b.axis == self.bottom_axis(j));
            let applies = match &b {
                Some(b) if in_partition => {
                    let other = b.other_anchor(r);
                    let clear = b.cells.iter().all(|c| !below.contains(c));
                    let on_band = self.band(other) == j;
                    let order_ok = if self.visited(other) {
                        sel.visit_rank(r) < sel.visit_rank(other)
                    } else {
                        !sel.quasi_adjacent
                    };
                    clear && on_band && order_ok
                }
                _ => true,
            };
            if applies {
                let side = (self.up(r)? + 2) & 3;
                self.vacant(&format!("P1({j}) cell {r}"), &[r], side)?;
            }
        }
        Ok(())
    }

    /// Beam on the bottom of `O_{j+1}` whose part outside the `j`-bridge is empty or one run anchored on band `j+1`.
    fn stable(&self, j: usize, b: &Beam) -> bool {
        let bridge = self.bridge(j);
        if b.cells.iter().all(|c| !bridge.contains(c)) {
            return true;
        }
        let mut runs: Vec<Vec<CellId>> = vec![Vec::new()];
        for &c in &b.cells {
            if bridge.contains(&c) {
                runs.push(Vec::new());
            } else {
                runs.last_mut().expect("non-empty").push(c);
            }
        }
        let runs: Vec<Vec<CellId>> = runs.into_iter().filter(|r| !r.is_empty()).collect();
        match runs.as_slice() {
            [] => true,
            [run] => {
                let anchor = if run.contains(&b.cells[0]) { b.anchors.0 } else { b.anchors.1 };
                run.contains(&b.cells[0]) != run.contains(b.cells.last().expect("non-empty"))
                    && self.band(anchor) == j + 1
            }
            _ => false,
        }
    }

    fn p2(&mut self, j: usize, only: impl Fn(CellId) -> bool) -> Result<()> {
        let sel = self.sels.layer(j);
        let m = self.sels.m();
        for &r in &sel.visited {
            if r == sel.right || !only(r) {
                continue;
            }
            let up = self.up(r)?;
            let tag = format!("P2({j}) cell {r}");
            match beam_of(self.s, r, j)? {
                None => {
                    let (u, _) = self.s.neighbor(r, 1);
                    let quasi_above = j < m && self.sels.layer(j + 1).quasi_adjacent;
                    if quasi_above && self.net.is_glued(r, u) && !self.visited(u) {
                        self.vacant(&tag, &[u], up)?;
                    } else {
                        self.vacant(&tag, &[r], up)?;
                    }
                }
                Some(b) => {
                    let top = b.kind(self.s) == CellKind::Top;
                    let in_partition = top && b.axis == self.top_axis(j);
                    if top && !in_partition {
                        self.vacant(&tag, &[r], up)?;
                    } else if !top && j < m && self.stable(j, &b) {
                        let upper = self.sels.layer(j + 1);
                        let anchor = [b.anchors.0, b.anchors.1].into_iter().find(|&a| self.band(a) == j + 1);
                        let ok = !upper.quasi_adjacent || anchor.is_some_and(|a| upper.is_visited(a));
                        if ok {
                            self.vacant(&tag, &[r], up)?;
                        }
                    } else if in_partition {
                        let other = b.other_anchor(r);
                        let to_next = sel.next_left.is_some_and(|nl| b.has_anchor(nl));
                        let upper_quasi = j < m && self.sels.layer(j + 1).quasi_adjacent;
                        let hangs = self.band(other) == j || (self.band(other) == j + 1 && upper_quasi);
                        let to_unvisited = hangs && self.s.is_band(other) && !self.visited(other);
                        if !to_next && !to_unvisited && self.net.is_placed(b.cells[0]) {
                            let side = self.row_up(j)?;
                            self.vacant(&format!("P2c({j}) beam of {r}"), &b.cells, side)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn p3(&mut self, j: usize) -> Result<()> {
        let sel = self.sels.layer(j);
        for &r in &sel.visited {
            let (u, _) = self.s.neighbor(r, 1);
            if !self.s.is_band(u) {
                continue;
            }
            let p = self.net.pos(r)?;
            let (dx, dy) = crate::geom::net_step(self.up(r)?);
            match self.net.occupant((p.0 + dx, p.1 + dy)) {
                Some(o) if o != u => self.fail(format!("P3({j}) cell {r}: space above held by {o}")),
                _ => {}
            }
        }
        Ok(())
    }

    /// Bridge cells of layer `j` still hanging in the bridge; cells moved onto a row are dropped.
    fn in_bridge(&self, j: usize, b: &Beam) -> Vec<CellId> {
        let sel = self.sels.layer(j);
        let mut keep: BTreeSet<CellId> = self.bridge(j);
        keep.insert(sel.right);
        keep.extend(sel.next_left);
        b.cells
            .iter()
            .copied()
            .filter(|&c| (0..4).map(|k| self.s.neighbor(c, k).0).any(|n| keep.contains(&n) && self.net.is_glued(c, n)))
            .collect()
    }

    fn p4(&mut self, j: usize) -> Result<()> {
        let sel = self.sels.layer(j);
        let side = self.row_up(j)?;
        for b in &sel.bridge {
            if sel.next_left.is_some_and(|nl| b.has_anchor(nl)) {
                continue;
            }
            let cells = self.in_bridge(j, b);
            self.vacant_but(&format!("P4({j})"), &cells, &[b.anchors.0, b.anchors.1], side)?;
        }
        Ok(())
    }

    fn p5(&mut self, j: usize) -> Result<()> {
        let sel = self.sels.layer(j);
        let side = (self.row_up(j)? + 2) & 3;
        for b in &sel.bridge {
            if b.has_anchor(sel.right) {
                continue;
            }
            let cells = self.in_bridge(j, b);
            self.vacant_but(&format!("P5({j})"), &cells, &[b.anchors.0, b.anchors.1], side)?;
        }
        Ok(())
    }

    fn relocatable(&mut self, tag: String, cells: &[CellId]) -> Result<()> {
        if !self.net.relocatable(cells)? {
            self.fail(format!("{tag}: {cells:?} not relocatable"));
        }
        Ok(())
    }

    fn p6(&mut self, j: usize) -> Result<()> {
        let sel = self.sels.layer(j);
        if j >= 2 {
            let below = self.bridge(j - 1);
            if let Some(b) = beam_of(self.s, sel.right, j - 1)? {
                if b.cells.iter().all(|c| !below.contains(c)) {
                    let kind = b.kind(self.s);
                    if kind == CellKind::Top && b.axis == self.top_axis(j - 1) {
                        let lower_left = self.sels.layer(j - 1).left;
                        if b.cells.len() > 1 || !b.has_anchor(lower_left) {
                            self.relocatable(format!("P6a({j})"), &b.cells[..1])?;
                        }
                    } else if kind == CellKind::Bottom
                        && b.axis == self.bottom_axis(j)
                        && self.band(b.anchors.0) == j
                        && self.band(b.anchors.1) == j
                    {
                        self.relocatable(format!("P6b({j})"), &b.cells)?;
                    }
                }
            }
        }
        let tops: BTreeSet<CellId> = self.s.top_cells(j).collect();
        let bridge = self.bridge(j);
        for y in crate::bandgraph::partition(self.s, &tops, self.top_axis(j)) {
            if y.cells.iter().any(|c| bridge.contains(c)) || y.has_anchor(sel.left) {
                continue;
            }
            let (a0, a1) = y.anchors;
            let vis = |a: CellId| self.band(a) == j && self.visited(a);
            if vis(a0) && vis(a1) {
                self.relocatable(format!("P6c({j})"), &y.cells)?;
            }
        }
        Ok(())
    }
}

/// Whether two surface cells share at least a corner.
fn incident(s: &Surface, a: CellId, b: CellId) -> bool {
    let (ca, cb) = (s.cell(a), s.cell(b));
    let (pa, pb) = (ca.center2(), cb.center2());
    (0..3).all(|k| {
        let w = |axis: usize| i32::from(axis != k);
        (pa[k] - pb[k]).abs() <= w(ca.normal.axis()) + w(cb.normal.axis())
    })
}

/// Failed properties for the given phase; empty when all hold.
pub fn assert_net_properties(s: &Surface, sels: &Selections, net: &UnfoldingNet, phase: Phase) -> Result<Vec<String>> {
    let mut cx = Ctx { s, sels, net, out: Vec::new() };
    let m = sels.m();
    match phase {
        Phase::AfterStage3 => {
            for j in 1..=m {
                cx.p1(j, |_| true)?;
                cx.p2(j, |_| true)?;
                cx.p3(j)?;
                cx.p4(j)?;
                cx.p5(j)?;
                cx.p6(j)?;
            }
        }
        Phase::BeforeLayer(i) => {
            let prev = sels.layer(i - 1);
            if prev.quasi_adjacent {
                let r = prev.right;
                cx.p1(i - 1, |c| c == r)?;
            }
            let left = sels.layer(i).left;
            cx.p1(i, |c| s.shared_edge(c, left).is_none())?;
            for j in i + 1..=m {
                cx.p1(j, |_| true)?;
            }
            if prev.visited.len() >= 2 {
                let r = prev.visited[prev.visited.len() - 2];
                cx.p2(i - 1, |c| c == r)?;
            }
            for j in i..=m {
                cx.p2(j, |_| true)?;
            }
            for j in i - 1..=m {
                cx.p3(j)?;
                cx.p4(j)?;
            }
            let adjacent = s.shared_edge(prev.right, prev.left).is_some();
            let incident = match beam_of(s, prev.right, i - 1)? {
                Some(b) => b.cells.iter().any(|&c| incident(s, c, prev.left)),
                None => false,
            };
            if adjacent || !incident {
                cx.p5(i - 1)?;
            }
            for j in i..=m {
                cx.p5(j)?;
                cx.p6(j)?;
            }
        }
    }
    Ok(cx.out)
}
