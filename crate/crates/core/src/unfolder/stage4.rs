//! Placement of unvisited band segments, one layer at a time.

use super::{Builder, SegmentCase};
use crate::bandgraph::{BandSelection, Beam};
use crate::error::{invariant, Result};
use crate::geom::{Frame, Side};
use crate::model::{opposite_cell, CellId};

/// Maximal run of band cells orthogonal to `R_i`, with the parallel cells bounding it.
struct Segment {
    a: CellId,
    cells: Vec<CellId>,
    b: CellId,
}

impl Builder<'_> {
    fn segments(&self, sel: &BandSelection) -> Vec<Segment> {
        let cyc = self.sels.cycle(sel.layer);
        let axis = self.s.cell(sel.right).normal.axis();
        let order = cyc.walk(sel.right, cyc.prev(sel.right, sel.turn), sel.turn);
        let mut out = Vec::new();
        let mut k = 0;
        while k < order.len() {
            if self.s.cell(order[k]).normal.axis() == axis {
                k += 1;
                continue;
            }
            let start = k;
            while k < order.len() && self.s.cell(order[k]).normal.axis() != axis {
                k += 1;
            }
            let b = if k < order.len() { order[k] } else { sel.right };
            out.push(Segment { a: order[start - 1], cells: order[start..k].to_vec(), b });
        }
        out
    }

    pub(super) fn stage4(&mut self, i: usize) -> Result<()> {
        let sels = self.sels;
        let sel = sels.layer(i);
        if !sel.quasi_adjacent {
            let frame = Frame::new(self.s.cell(sel.right).normal, sel.turn);
            for seg in self.segments(sel) {
                let star: Vec<CellId> = seg.cells.iter().copied().filter(|&c| !self.visited(c)).collect();
                if star.is_empty() {
                    continue;
                }
                if let Some(&c) = star.iter().find(|&&c| self.net.is_placed(c)) {
                    return invariant(format!("layer {i}: unvisited cell {c} placed before stage 4"));
                }
                let right = frame.side(self.s.cell(seg.cells[0]).normal) == Some(Side::Right);
                let (case, common) = self.segment(sel, &seg, &star, right)?;
                self.trace.segments.push(SegmentCase { layer: i, cells: star, right, case, common });
            }
        }
        let missing: Vec<CellId> = sels.cycle(i).cells().iter().copied().filter(|&c| !self.net.is_placed(c)).collect();
        if !missing.is_empty() {
            return invariant(format!("layer {i}: band cells {missing:?} left unplaced"));
        }
        Ok(())
    }

    fn beam_cells(&self, c: CellId, plane: usize) -> Result<Vec<CellId>> {
        match self.beam(c, plane)? {
            Some(b) => Ok(b.cells),
            None => invariant(format!("cell {c} has an empty {plane}-beam")),
        }
    }

    fn segment(
        &mut self,
        sel: &BandSelection,
        seg: &Segment,
        star: &[CellId],
        right: bool,
    ) -> Result<(u8, Option<&'static str>)> {
        let i = sel.layer;
        let (a, b) = (seg.a, seg.b);
        let cyc = self.sels.cycle(i);
        match (self.visited(a), self.visited(b)) {
            (false, false) => {
                let a2 = opposite_cell(self.s, a)?;
                let b2 = opposite_cell(self.s, b)?;
                let other = cyc.open(b2, a2, sel.turn);
                if star.len() <= other.len() {
                    self.place(4, i, "case1", star, &[a])?;
                } else {
                    let pred = cyc.prev(a2, sel.turn);
                    self.cut_shift(i, "case1", &[(pred, a2)], star, &[a, b])?;
                }
                Ok((1, None))
            }
            (true, false) => {
                let host = if right { self.beam_cells(a, i)? } else { self.beam_cells(opposite_cell(self.s, b)?, i)? };
                self.place(4, i, "case2", star, &host)?;
                Ok((2, None))
            }
            (true, true) => {
                if right {
                    let host = self.beam_cells(a, i)?;
                    self.place(4, i, "case3", star, &host)?;
                    Ok((3, None))
                } else if b == sel.left {
                    Ok((3, Some(self.common(sel, star)?)))
                } else {
                    invariant(format!("layer {i}: left segment between visited {a} and {b} does not end at L_{i}"))
                }
            }
            (false, true) => {
                let rn = self.s.cell(sel.right).normal;
                let bn = self.s.cell(b).normal;
                let holds_left = seg.cells.contains(&sel.left);
                if bn == rn {
                    if right {
                        let host = self.beam_cells(opposite_cell(self.s, a)?, i)?;
                        self.place(4, i, "case4", star, &host)?;
                        Ok((4, None))
                    } else if b == sel.left {
                        Ok((4, Some(self.common(sel, star)?)))
                    } else if holds_left {
                        let beam = self.beam_cells(b, i)?;
                        if !self.net.is_glued(beam[0], b) {
                            self.relocate(i, "case4", &beam, &[b])?;
                        }
                        self.place(4, i, "case4", star, &beam)?;
                        Ok((4, None))
                    } else {
                        invariant(format!("layer {i}: segment before {b} misses L_{i}"))
                    }
                } else if holds_left {
                    let host = self.beam_cells(b, i)?;
                    self.place(4, i, "case4", star, &host)?;
                    Ok((4, None))
                } else if b == sel.left {
                    Ok((4, Some(self.common(sel, star)?)))
                } else {
                    invariant(format!("layer {i}: segment before back cell {b} misses L_{i}"))
                }
            }
        }
    }

    /// Segment `piece` meets `L_i` at a convex corner and `R_i` is parallel to `L_i`.
    fn common(&mut self, sel: &BandSelection, piece: &[CellId]) -> Result<&'static str> {
        let i = sel.layer;
        let l = sel.left;
        let ell = self.beam_cells(l, i)?[0];
        let mark = self.trace.events.len();
        let moved =
            !self.net.is_glued(ell, l) && self.net.relocatable(&[ell])? && self.net.relocate(self.s, &[ell], &[l]).is_ok();
        let label = self.common_inner(sel, piece, ell)?;
        if moved {
            let ev = super::TraceEvent { stage: 4, layer: i, label, op: super::Op::Relocate, cells: vec![ell], hosts: vec![l] };
            self.trace.events.insert(mark, ev);
        }
        Ok(label)
    }

    fn common_inner(&mut self, sel: &BandSelection, piece: &[CellId], ell: CellId) -> Result<&'static str> {
        let i = sel.layer;
        let l = sel.left;
        if !self.net.is_glued(ell, l) {
            return self.common4(sel, piece, ell);
        }
        let below = self.sels.layer(i - 1);
        let bbeam: Option<Beam> = self.beam(l, i - 1)?;
        let f = match &bbeam {
            Some(bm) => bm.other_anchor(l),
            None => self.s.neighbor(l, 3).0,
        };
        let y = self.sels.cycle(i - 1).prev(f, sel.turn);
        let ybeam = self.beam(y, i - 1)?;
        let touches = |cells: &[CellId]| cells.iter().any(|&c| piece.iter().any(|&p| self.s.shared_edge(c, p).is_some()));
        match &bbeam {
            Some(bm) if !bm.is_top(self.s) => {
                let label = "common3";
                match &ybeam {
                    Some(yb) if yb.is_top(self.s) && touches(&yb.cells) => {
                        let mut hosts = yb.cells.clone();
                        hosts.push(ell);
                        self.cut_shift(i, label, &[(y, f)], piece, &hosts)?;
                    }
                    _ => {
                        // A segment overhanging `y` does not fit beside B; it goes beside `ell` instead.
                        if self.try_place(4, i, label, piece, &bm.cells).is_err() {
                            self.place(4, i, label, piece, &[ell])?;
                        }
                    }
                }
                Ok(label)
            }
            _ if below.bridge.len() <= 1 => {
                let label = "common1";
                let r_prev = self.s.cell(below.right).normal.axis();
                match &ybeam {
                    Some(yb) if self.s.cell(y).normal.axis() == r_prev && yb.is_top(self.s) => {
                        if touches(&yb.cells) {
                            let mut hosts = yb.cells.clone();
                            hosts.push(ell);
                            self.cut_shift(i, label, &[(y, f)], piece, &hosts)?;
                        } else if bbeam.is_some() {
                            self.place(4, i, label, piece, &[ell])?;
                        } else {
                            return invariant(format!("layer {i}: beam of {y} misses the segment while L_{i} has no lower beam"));
                        }
                    }
                    _ => self.place(4, i, label, piece, &[ell])?,
                }
                Ok(label)
            }
            _ => {
                let label = "common2";
                let n = below.bridge.len();
                let bb = &below.bridge[n - 1];
                let t = &below.bridge[n - 2];
                if touches(&t.cells) {
                    let seam: Vec<(CellId, CellId)> = t
                        .cells
                        .iter()
                        .flat_map(|&x| bb.cells.iter().map(move |&z| (x, z)))
                        .filter(|&(x, z)| self.net.is_glued(x, z))
                        .collect();
                    let mut hosts = t.cells.clone();
                    hosts.push(ell);
                    self.cut_shift(i, label, &seam, piece, &hosts)?;
                } else {
                    self.place(4, i, label, piece, &[ell])?;
                }
                Ok(label)
            }
        }
    }

    /// `ell` stays in the bridge; the segment joins `R_i` to `L_i`.
    fn common4(&mut self, sel: &BandSelection, piece: &[CellId], ell: CellId) -> Result<&'static str> {
        let i = sel.layer;
        let r = sel.right;
        let Some(z) = piece.iter().copied().find(|&c| self.s.shared_edge(c, r).is_some()) else {
            return invariant(format!("layer {i}: segment {piece:?} does not touch R_{i}"));
        };
        let zbeam = self.beam(z, i - 1)?;
        match zbeam {
            None => {
                let label = "common4.1";
                let (u, _) = self.s.neighbor(z, 3);
                self.place(4, i, label, &[z], &[u])?;
                if let Some(rb) = self.beam(r, i - 1)? {
                    if self.net.is_glued(rb.cells[0], r) {
                        let h = opposite_cell(self.s, r)?;
                        self.relocate(i, label, &rb.cells, &[h])?;
                    }
                }
                let rest: Vec<CellId> = piece.iter().copied().filter(|&c| c != z).collect();
                let bridge: Vec<CellId> = sel.bridge_cells().into_iter().collect();
                self.place(4, i, label, &rest, &bridge)?;
                Ok(label)
            }
            Some(zb) if !zb.is_top(self.s) => {
                let label = "common4.2";
                let g = opposite_cell(self.s, sel.left)?;
                // When the beam under `g` misses the segment, the bottom beam under `z` takes it.
                if let Some(gb) = self.beam(g, i - 1)? {
                    if self.try_place(4, i, label, piece, &gb.cells).is_ok() {
                        return Ok(label);
                    }
                }
                self.place(4, i, label, piece, &zb.cells)?;
                Ok(label)
            }
            Some(_) => {
                let label = "common4.3";
                let (x, _) = self.s.neighbor(r, 3);
                if self.s.is_band(x) || self.s.shared_edge(x, z).is_none() {
                    return invariant(format!("layer {i}: no lower face cell meets both {z} and R_{i}"));
                }
                if !self.net.is_glued(x, r) {
                    self.relocate(i, label, &[x], &[r])?;
                }
                let rbeam = self.beam_cells(r, i)?;
                let lbeam = match sel.bridge.get(1) {
                    Some(next) => next.cells.clone(),
                    None => self.beam_cells(sel.left, i)?,
                };
                let seam: Vec<(CellId, CellId)> = rbeam
                    .iter()
                    .flat_map(|&p| lbeam.iter().map(move |&q| (p, q)))
                    .filter(|&(p, q)| self.net.is_glued(p, q))
                    .collect();
                self.cut_shift(i, label, &seam, piece, &[x, ell])?;
                Ok(label)
            }
        }
    }
}
