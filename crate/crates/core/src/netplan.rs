//! The unfolding net: unit squares on an integer grid plus the glued (uncut) edges between them.
//!
//! A placed cell has a position `(col, row)` and a rotation `rot`; local edge `k` of the
//! cell lies on net side `(k + rot) % 4`, where sides are 0 = +col, 1 = +row, 2 = -col,
//! 3 = -row. Every glued pair is surface-adjacent and placed by rigid development
//! across the shared edge, so positions never need to be chosen by hand.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geom::net_step;
use crate::model::{CellId, CellKind, Surface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Placement {
    pub pos: (i32, i32),
    pub rot: u8,
}

impl Placement {
    /// Net side holding local edge `k`.
    pub fn side_of(&self, k: u8) -> u8 {
        (k + self.rot) & 3
    }

    /// Local edge lying on net side `side`.
    pub fn edge_on(&self, side: u8) -> u8 {
        (side + 4 - self.rot) & 3
    }
}

/// Placement of `child` developed across edge `k` of `parent` (child edge `kc`).
pub fn develop(parent: Placement, k: u8, kc: u8) -> Placement {
    let d = parent.side_of(k);
    let (dx, dy) = net_step(d);
    Placement { pos: (parent.pos.0 + dx, parent.pos.1 + dy), rot: (d + 2 + 4 - kc) & 3 }
}

#[derive(Debug, Clone)]
pub struct UnfoldingNet {
    root: CellId,
    place: Vec<Option<Placement>>,
    occ: HashMap<(i32, i32), CellId>,
    glue: Vec<BTreeSet<CellId>>,
}

impl UnfoldingNet {
    /// Net over a surface of `n` cells with `root` placed at the origin.
    pub fn new(n: usize, root: CellId) -> UnfoldingNet {
        let mut net = UnfoldingNet { root, place: vec![None; n], occ: HashMap::new(), glue: vec![BTreeSet::new(); n] };
        net.place[root] = Some(Placement { pos: (0, 0), rot: 0 });
        net.occ.insert((0, 0), root);
        net
    }

    pub fn root(&self) -> CellId {
        self.root
    }

    pub fn is_placed(&self, c: CellId) -> bool {
        self.place[c].is_some()
    }

    pub fn placement(&self, c: CellId) -> Option<Placement> {
        self.place[c]
    }

    pub fn pos(&self, c: CellId) -> Result<(i32, i32)> {
        self.place[c].map(|p| p.pos).ok_or(Error::NotPlaced(c))
    }

    pub fn occupant(&self, pos: (i32, i32)) -> Option<CellId> {
        self.occ.get(&pos).copied()
    }

    pub fn placed_count(&self) -> usize {
        self.occ.len()
    }

    pub fn placed(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.place.len()).filter(|&c| self.place[c].is_some())
    }

    pub fn glued(&self, c: CellId) -> &BTreeSet<CellId> {
        &self.glue[c]
    }

    pub fn is_glued(&self, a: CellId, b: CellId) -> bool {
        self.glue[a].contains(&b)
    }

    fn put(&mut self, c: CellId, p: Placement) -> Result<()> {
        if self.place[c].is_some() {
            return Err(Error::AlreadyPlaced(c));
        }
        if let Some(&o) = self.occ.get(&p.pos) {
            return Err(Error::Overlap { placing: c, occupant: o, pos: p.pos });
        }
        self.place[c] = Some(p);
        self.occ.insert(p.pos, c);
        Ok(())
    }

    fn link(&mut self, a: CellId, b: CellId) {
        self.glue[a].insert(b);
        self.glue[b].insert(a);
    }

    pub fn unglue(&mut self, a: CellId, b: CellId) {
        self.glue[a].remove(&b);
        self.glue[b].remove(&a);
    }

    /// Where `child` lands when developed from placed `host`, if the two are surface-adjacent.
    pub fn expected(&self, s: &Surface, host: CellId, child: CellId) -> Option<Placement> {
        let hp = self.place[host]?;
        let k = s.shared_edge(host, child)?;
        let (_, kc) = s.neighbor(host, k);
        Some(develop(hp, k, kc))
    }

    /// Whether `a` and `b` are placed so that their shared surface edge is also shared in the net.
    pub fn consistent(&self, s: &Surface, a: CellId, b: CellId) -> bool {
        match (self.expected(s, a, b), self.place[b]) {
            (Some(e), Some(p)) => e == p,
            _ => false,
        }
    }

    /// Glue two placed cells; fails unless they are developed consistently.
    pub fn glue_pair(&mut self, s: &Surface, a: CellId, b: CellId) -> Result<()> {
        if !self.consistent(s, a, b) {
            return Err(Error::Invariant(format!("cells {a} and {b} are not developed across a shared edge")));
        }
        self.link(a, b);
        Ok(())
    }

    /// Place a rigid piece next to already placed `hosts`, gluing every consistent
    /// piece-piece and piece-host pair. The piece must be edge-connected.
    pub fn attach_piece(&mut self, s: &Surface, piece: &[CellId], hosts: &[CellId]) -> Result<()> {
        let set: BTreeSet<CellId> = piece.iter().copied().collect();
        for &p in piece {
            if self.is_placed(p) {
                return Err(Error::AlreadyPlaced(p));
            }
        }
        let seed = piece
            .iter()
            .flat_map(|&p| hosts.iter().map(move |&h| (p, h)))
            .find(|&(p, h)| self.is_placed(h) && s.shared_edge(h, p).is_some());
        let Some((p0, h0)) = seed else {
            return Err(Error::Invariant(format!("piece {piece:?} touches none of the hosts {hosts:?}")));
        };
        let pl = self.expected(s, h0, p0).expect("adjacent");
        self.put(p0, pl)?;
        let mut queue = VecDeque::from([p0]);
        let mut order = vec![p0];
        while let Some(x) = queue.pop_front() {
            for k in 0..4 {
                let (n, _) = s.neighbor(x, k);
                if set.contains(&n) && !self.is_placed(n) {
                    let pl = self.expected(s, x, n).expect("adjacent");
                    self.put(n, pl)?;
                    queue.push_back(n);
                    order.push(n);
                }
            }
        }
        if order.len() != set.len() {
            return Err(Error::Invariant(format!("piece {piece:?} is not edge-connected")));
        }
        for &x in &order {
            for k in 0..4 {
                let (n, _) = s.neighbor(x, k);
                if (set.contains(&n) || hosts.contains(&n)) && self.consistent(s, x, n) {
                    self.link(x, n);
                }
            }
        }
        Ok(())
    }

    /// Like [`attach_piece`](Self::attach_piece), but leaves the net untouched on failure.
    pub fn try_attach_piece(&mut self, s: &Surface, piece: &[CellId], hosts: &[CellId]) -> Result<()> {
        let snapshot = self.clone();
        let r = self.attach_piece(s, piece, hosts);
        if r.is_err() {
            *self = snapshot;
        }
        r
    }

    /// Place a single cell next to one host.
    pub fn attach(&mut self, s: &Surface, cell: CellId, host: CellId) -> Result<()> {
        self.attach_piece(s, &[cell], &[host])
    }

    /// Remove cells from the net together with their glue.
    pub fn detach(&mut self, cells: &[CellId]) -> Result<()> {
        for &c in cells {
            let p = self.place[c].ok_or(Error::NotPlaced(c))?;
            self.occ.remove(&p.pos);
            self.place[c] = None;
            let nbrs: Vec<CellId> = self.glue[c].iter().copied().collect();
            for n in nbrs {
                self.unglue(c, n);
            }
        }
        Ok(())
    }

    /// Connected components of the glue graph among placed cells, ignoring `skip`.
    fn components(&self, skip: &BTreeSet<CellId>) -> Vec<BTreeSet<CellId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in self.placed() {
            if skip.contains(&c) || seen.contains(&c) {
                continue;
            }
            let mut comp = BTreeSet::from([c]);
            seen.insert(c);
            let mut queue = VecDeque::from([c]);
            while let Some(x) = queue.pop_front() {
                for &n in &self.glue[x] {
                    if !skip.contains(&n) && seen.insert(n) {
                        comp.insert(n);
                        queue.push_back(n);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components(&BTreeSet::new()).len() <= 1
    }

    /// Removing `cells` keeps the rest of the net connected.
    pub fn relocatable(&self, cells: &[CellId]) -> Result<bool> {
        for &c in cells {
            if !self.is_placed(c) {
                return Err(Error::NotPlaced(c));
            }
        }
        let skip: BTreeSet<CellId> = cells.iter().copied().collect();
        Ok(self.components(&skip).len() <= 1)
    }

    /// Detach `subject` and attach it again next to `hosts`.
    pub fn relocate(&mut self, s: &Surface, subject: &[CellId], hosts: &[CellId]) -> Result<()> {
        if !self.relocatable(subject)? {
            return Err(Error::NotRelocatable(subject.to_vec()));
        }
        let snapshot = self.clone();
        self.detach(subject)?;
        if let Err(e) = self.attach_piece(s, subject, hosts) {
            *self = snapshot;
            return Err(e);
        }
        Ok(())
    }

    /// Cut the glued pairs in `seam`, which must split the net in two. The piece is
    /// attached to the hosts in the root's component; the other component is then
    /// translated so that its hosts meet the piece, and glued to it.
    pub fn cut_and_shift(
        &mut self,
        s: &Surface,
        seam: &[(CellId, CellId)],
        piece: &[CellId],
        hosts: &[CellId],
    ) -> Result<(i32, i32)> {
        let snapshot = self.clone();
        let r = self.try_cut_and_shift(s, seam, piece, hosts);
        if r.is_err() {
            *self = snapshot;
        }
        r
    }

    fn try_cut_and_shift(
        &mut self,
        s: &Surface,
        seam: &[(CellId, CellId)],
        piece: &[CellId],
        hosts: &[CellId],
    ) -> Result<(i32, i32)> {
        for &(a, b) in seam {
            if !self.is_glued(a, b) {
                return Err(Error::Invariant(format!("seam pair {a}-{b} is not glued")));
            }
            self.unglue(a, b);
        }
        let comps = self.components(&BTreeSet::new());
        if comps.len() != 2 {
            return Err(Error::BadCut(comps.len()));
        }
        let (fixed, moving) = if comps[0].contains(&self.root) { (&comps[0], &comps[1]) } else { (&comps[1], &comps[0]) };
        let fixed_hosts: Vec<CellId> = hosts.iter().copied().filter(|h| fixed.contains(h)).collect();
        let moving_hosts: Vec<CellId> = hosts.iter().copied().filter(|h| moving.contains(h)).collect();
        if fixed_hosts.is_empty() || moving_hosts.is_empty() {
            return Err(Error::Invariant(format!("hosts {hosts:?} do not straddle the cut")));
        }
        let moving: Vec<CellId> = moving.iter().copied().collect();
        let saved: Vec<(CellId, Placement)> = moving.iter().map(|&c| (c, self.place[c].expect("placed"))).collect();
        for &(c, p) in &saved {
            self.occ.remove(&p.pos);
            self.place[c] = None;
        }
        self.attach_piece(s, piece, &fixed_hosts)?;
        let mut shift = None;
        'find: for &p in piece {
            for &(h, hp) in &saved {
                if !moving_hosts.contains(&h) {
                    continue;
                }
                if let Some(e) = self.expected(s, p, h) {
                    if e.rot != hp.rot {
                        return Err(Error::Invariant(format!("host {h} would need a rotation to meet the piece")));
                    }
                    shift = Some((e.pos.0 - hp.pos.0, e.pos.1 - hp.pos.1));
                    break 'find;
                }
            }
        }
        let Some((dx, dy)) = shift else {
            return Err(Error::Invariant("piece touches no host of the moved component".into()));
        };
        for &(c, p) in &saved {
            self.put(c, Placement { pos: (p.pos.0 + dx, p.pos.1 + dy), rot: p.rot })?;
        }
        for &p in piece {
            for &h in &moving_hosts {
                if self.consistent(s, p, h) {
                    self.link(p, h);
                }
            }
        }
        Ok((dx, dy))
    }

    /// No occupied square lies beyond `c` on net side `side`, within `c`'s column or row.
    pub fn vacant_beyond(&self, c: CellId, side: u8) -> Result<bool> {
        let p = self.pos(c)?;
        let (dx, dy) = net_step(side);
        Ok(!self.occ.keys().any(|&(x, y)| {
            if dx != 0 {
                y == p.1 && (x - p.0) * dx > 0
            } else {
                x == p.0 && (y - p.1) * dy > 0
            }
        }))
    }

    /// Net side that points "up" for a band row: the side holding `band_cell`'s top edge.
    pub fn up_side(&self, band_cell: CellId) -> Result<u8> {
        Ok(self.place[band_cell].ok_or(Error::NotPlaced(band_cell))?.side_of(1))
    }

    /// Breadth-first spanning tree of the glue graph from the root: `(child, parent)` pairs.
    pub fn spanning_tree(&self) -> Vec<(CellId, CellId)> {
        let mut seen = BTreeSet::from([self.root]);
        let mut queue = VecDeque::from([self.root]);
        let mut out = Vec::new();
        while let Some(x) = queue.pop_front() {
            for &n in &self.glue[x] {
                if seen.insert(n) {
                    out.push((n, x));
                    queue.push_back(n);
                }
            }
        }
        out
    }

    /// Export as records: one per placed cell, parent edges from the spanning tree.
    pub fn records(&self, s: &Surface) -> Vec<NetRecord> {
        let parents: HashMap<CellId, CellId> = self.spanning_tree().into_iter().collect();
        self.placed()
            .map(|c| {
                let p = self.place[c].expect("placed");
                let cell = s.cell(c);
                let parent = parents.get(&c).copied();
                NetRecord {
                    cell: c,
                    base: cell.base(),
                    normal: cell.normal,
                    col: p.pos.0,
                    row: p.pos.1,
                    rot: p.rot,
                    parent,
                    edge: parent.and_then(|q| s.shared_edge(q, c)),
                }
            })
            .collect()
    }

    pub fn audit(&self, s: &Surface) -> Audit {
        audit_records(s, self.root, &self.records(s))
    }
}

/// One line of the net file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetRecord {
    pub cell: CellId,
    pub base: crate::geom::Vec3,
    pub normal: crate::geom::Dir,
    pub col: i32,
    pub row: i32,
    pub rot: u8,
    pub parent: Option<CellId>,
    /// Edge of the parent cell shared with this cell.
    pub edge: Option<u8>,
}

/// Serialize records: a header line, then one `cell` line per record.
pub fn records_to_text(records: &[NetRecord]) -> String {
    let mut out = format!("net cells {}\n", records.len());
    for r in records {
        let parent = r.parent.map_or("-".to_string(), |p| p.to_string());
        let edge = r.edge.map_or("-".to_string(), |e| e.to_string());
        let _ = writeln!(
            out,
            "cell {} base {} {} {} normal {} col {} row {} rot {} parent {} edge {}",
            r.cell, r.base[0], r.base[1], r.base[2], r.normal, r.col, r.row, r.rot, parent, edge
        );
    }
    out
}

pub fn records_from_text(text: &str) -> std::result::Result<Vec<NetRecord>, String> {
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Err("empty net file".into());
    };
    let declared: usize = header
        .strip_prefix("net cells ")
        .and_then(|n| n.trim().parse().ok())
        .ok_or_else(|| format!("bad header: {header}"))?;
    for (no, line) in lines {
        let t: Vec<&str> = line.split_whitespace().collect();
        let keys = [(0, "cell"), (2, "base"), (6, "normal"), (8, "col"), (10, "row"), (12, "rot"), (14, "parent"), (16, "edge")];
        if t.len() != 18 || keys.iter().any(|&(k, name)| t[k] != name) {
            return Err(format!("line {}: malformed record", no + 1));
        }
        let int = |k: usize| t[k].parse::<i64>().map_err(|_| format!("line {}: bad integer {:?}", no + 1, t[k]));
        let opt = |k: usize| -> std::result::Result<Option<i64>, String> {
            if t[k] == "-" {
                Ok(None)
            } else {
                int(k).map(Some)
            }
        };
        let normal = crate::geom::Dir::ALL
            .into_iter()
            .find(|d| d.name() == t[7])
            .ok_or_else(|| format!("line {}: bad normal {:?}", no + 1, t[7]))?;
        out.push(NetRecord {
            cell: int(1)? as CellId,
            base: [int(3)? as i32, int(4)? as i32, int(5)? as i32],
            normal,
            col: int(9)? as i32,
            row: int(11)? as i32,
            rot: (int(13)? & 3) as u8,
            parent: opt(15)?.map(|p| p as CellId),
            edge: opt(17)?.map(|e| (e & 3) as u8),
        });
    }
    if out.len() != declared {
        return Err(format!("header declares {declared} cells, found {}", out.len()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Audit {
    pub connected: bool,
    pub overlap_free: bool,
    pub tree: bool,
    pub development_exact: bool,
    pub failures: Vec<String>,
}

impl Audit {
    pub fn ok(&self) -> bool {
        self.connected && self.overlap_free && self.tree && self.development_exact
    }
}

/// Structural audit of exported records against the surface they claim to unfold.
pub fn audit_records(s: &Surface, root: CellId, recs: &[NetRecord]) -> Audit {
    let mut failures = Vec::new();
    let mut at: BTreeMap<(i32, i32), CellId> = BTreeMap::new();
    let mut overlap_free = true;
    for r in recs {
        if let Some(o) = at.insert((r.col, r.row), r.cell) {
            overlap_free = false;
            failures.push(format!("cells {o} and {} share square ({}, {})", r.cell, r.col, r.row));
        }
    }
    let by_cell: HashMap<CellId, &NetRecord> = recs.iter().map(|r| (r.cell, r)).collect();
    let edges = recs.iter().filter(|r| r.parent.is_some()).count();
    let mut children: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    for r in recs {
        if let Some(p) = r.parent {
            children.entry(p).or_default().push(r.cell);
        }
    }
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    let mut development_exact = by_cell.get(&root).map_or(false, |r| r.parent.is_none());
    while let Some(x) = queue.pop_front() {
        for &c in children.get(&x).map(|v| v.as_slice()).unwrap_or(&[]) {
            if !seen.insert(c) {
                continue;
            }
            queue.push_back(c);
            let (rp, rc) = (by_cell[&x], by_cell[&c]);
            let ok = match rc.edge {
                Some(k) if s.neighbor(x, k).0 == c => {
                    let kc = s.neighbor(x, k).1;
                    let e = develop(Placement { pos: (rp.col, rp.row), rot: rp.rot }, k, kc);
                    e.pos == (rc.col, rc.row) && e.rot == rc.rot
                }
                _ => false,
            };
            if !ok && development_exact {
                failures.push(format!("cell {c} is not developed from parent {x}"));
            }
            development_exact &= ok;
        }
    }
    let connected = seen.len() == recs.len() && recs.len() == by_cell.len();
    if !connected {
        failures.push(format!("{} of {} cells reachable from the root", seen.len(), recs.len()));
    }
    let tree = connected && edges + 1 == recs.len();
    Audit { connected, overlap_free, tree, development_exact, failures }
}

pub const SVG_SCALE: i32 = 20;
pub const SVG_COLORS: [(CellKind, &str); 3] =
    [(CellKind::Band, "#9ecae1"), (CellKind::Top, "#fdd49e"), (CellKind::Bottom, "#c994c7")];

/// Render records as SVG: one square per cell, cut edges thick, glued edges thin.
pub fn render_svg(s: &Surface, recs: &[NetRecord]) -> String {
    let k = SVG_SCALE;
    let (mut x0, mut x1, mut y0, mut y1) = (i32::MAX, i32::MIN, i32::MAX, i32::MIN);
    for r in recs {
        x0 = x0.min(r.col);
        x1 = x1.max(r.col);
        y0 = y0.min(r.row);
        y1 = y1.max(r.row);
    }
    if recs.is_empty() {
        (x0, x1, y0, y1) = (0, 0, 0, 0);
    }
    let w = (x1 - x0 + 1) * k + 2 * k;
    let h = (y1 - y0 + 1) * k + 2 * k;
    let px = |col: i32| (col - x0 + 1) * k;
    let py = |row: i32| (y1 - row + 1) * k;
    let mut out = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n");
    for r in recs {
        let kind = s.cell(r.cell).kind;
        let fill = SVG_COLORS.iter().find(|(c, _)| *c == kind).map(|(_, f)| *f).unwrap_or("#ffffff");
        let _ = writeln!(out, "<rect x=\"{}\" y=\"{}\" width=\"{k}\" height=\"{k}\" fill=\"{fill}\"/>", px(r.col), py(r.row));
    }
    let glued: BTreeSet<(CellId, CellId)> =
        recs.iter().filter_map(|r| r.parent.map(|p| (p.min(r.cell), p.max(r.cell)))).collect();
    let at: HashMap<(i32, i32), CellId> = recs.iter().map(|r| ((r.col, r.row), r.cell)).collect();
    for r in recs {
        for side in 0..4u8 {
            let (dx, dy) = net_step(side);
            let other = at.get(&(r.col + dx, r.row + dy)).copied();
            if let Some(o) = other {
                if o < r.cell {
                    continue;
                }
            }
            let thin = other.map_or(false, |o| glued.contains(&(r.cell.min(o), r.cell.max(o))));
            let (x, y) = (px(r.col), py(r.row));
            let (ax, ay, bx, by) = match side {
                0 => (x + k, y, x + k, y + k),
                1 => (x, y, x + k, y),
                2 => (x, y, x, y + k),
                _ => (x, y + k, x + k, y + k),
            };
            let (stroke, width) = if thin { ("#888888", "0.5") } else { ("#000000", "2.5") };
            let _ = writeln!(
                out,
                "<line x1=\"{ax}\" y1=\"{ay}\" x2=\"{bx}\" y2=\"{by}\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>"
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Dir;
    use crate::model::{extract_surface, Polycube};

    fn slab4() -> Surface {
        extract_surface(&Polycube::new((0..4).map(|x| [x, 0, 0])).unwrap()).unwrap()
    }

    fn front_row(s: &Surface) -> Vec<CellId> {
        (0..4).map(|x| s.find([x, 0, 0], Dir::NegY).unwrap()).collect()
    }

    #[test]
    fn develop_is_inverse_across_edge() {
        let p = Placement { pos: (3, -2), rot: 1 };
        for k in 0..4 {
            for kc in 0..4 {
                let c = develop(p, k, kc);
                assert_eq!(develop(c, kc, k), p);
            }
        }
    }

    #[test]
    fn row_then_top_cell() {
        let s = slab4();
        let row = front_row(&s);
        let mut net = UnfoldingNet::new(s.len(), row[0]);
        net.attach_piece(&s, &row[1..], &[row[0]]).unwrap();
        let top = s.neighbor(row[2], 1).0;
        net.attach(&s, top, row[2]).unwrap();
        assert_eq!(net.placed_count(), 5);
        for (x, &c) in row.iter().enumerate() {
            assert_eq!(net.pos(c).unwrap(), (x as i32, 0));
        }
        assert_eq!(net.pos(top).unwrap(), (2, 1));
        assert_eq!(net.up_side(row[0]).unwrap(), 1);
        assert!(!net.vacant_beyond(row[2], 1).unwrap());
        assert!(net.vacant_beyond(row[1], 1).unwrap());
        assert!(net.audit(&s).ok());
    }

    #[test]
    fn overlap_is_reported() {
        let s = slab4();
        let row = front_row(&s);
        let mut net = UnfoldingNet::new(s.len(), row[0]);
        net.attach_piece(&s, &row[1..], &[row[0]]).unwrap();
        let back = s.find([0, 0, 0], Dir::PosY).unwrap();
        net.put(back, Placement { pos: (2, 1), rot: 0 }).unwrap();
        let top = s.neighbor(row[2], 1).0;
        let err = net.attach(&s, top, row[2]).unwrap_err();
        assert_eq!(err, Error::Overlap { placing: top, occupant: back, pos: (2, 1) });
    }

    #[test]
    fn relocatable_leaf_and_articulation() {
        let s = slab4();
        let row = front_row(&s);
        let mut net = UnfoldingNet::new(s.len(), row[0]);
        net.attach_piece(&s, &row[1..], &[row[0]]).unwrap();
        assert!(net.relocatable(&[row[3]]).unwrap());
        assert!(!net.relocatable(&[row[2]]).unwrap());
        assert!(net.relocate(&s, &[row[2]], &[row[1]]).is_err());
        assert_eq!(net.pos(row[2]).unwrap(), (2, 0));
    }

    #[test]
    fn relocate_moves_top_cell() {
        let s = slab4();
        let row = front_row(&s);
        let mut net = UnfoldingNet::new(s.len(), row[0]);
        net.attach_piece(&s, &row[1..], &[row[0]]).unwrap();
        let top = s.neighbor(row[2], 1).0;
        net.attach(&s, top, row[2]).unwrap();
        let top3 = s.neighbor(row[3], 1).0;
        net.attach(&s, top3, row[3]).unwrap();
        net.relocate(&s, &[top3], &[top]).unwrap();
        assert_eq!(net.pos(top3).unwrap(), (3, 1));
        assert!(net.is_glued(top3, top));
        assert!(!net.is_glued(top3, row[3]));
    }

    #[test]
    fn cut_and_shift_translates_far_side() {
        let s = slab4();
        let row = front_row(&s);
        let mut net = UnfoldingNet::new(s.len(), row[0]);
        net.attach_piece(&s, &row[1..], &[row[0]]).unwrap();
        // hang the right half on the top cells instead: cut between row[1] and row[2] and
        // reconnect through the top cells of cubes 1 and 2
        let t1 = s.neighbor(row[1], 1).0;
        let t2 = s.neighbor(row[2], 1).0;
        net.attach(&s, t1, row[1]).unwrap();
        net.attach(&s, t2, row[2]).unwrap();
        let before = net.placed_count();
        let err = net.cut_and_shift(&s, &[(row[1], row[2])], &[], &[t1, t2]);
        assert!(err.is_err());
        assert_eq!(net.placed_count(), before);
        assert!(net.is_glued(row[1], row[2]));
        let mut net2 = UnfoldingNet::new(s.len(), row[0]);
        net2.attach_piece(&s, &row[1..], &[row[0]]).unwrap();
        assert!(matches!(net2.cut_and_shift(&s, &[(row[0], row[1])], &[], &[row[0]]), Err(Error::Invariant(_))));
    }

    #[test]
    fn records_round_trip_and_audit() {
        let s = slab4();
        let row = front_row(&s);
        let mut net = UnfoldingNet::new(s.len(), row[0]);
        net.attach_piece(&s, &row[1..], &[row[0]]).unwrap();
        let recs = net.records(&s);
        let text = records_to_text(&recs);
        assert_eq!(records_from_text(&text).unwrap(), recs);
        assert!(audit_records(&s, row[0], &recs).ok());
        let mut dup = recs.clone();
        dup[1].col = dup[0].col;
        dup[1].row = dup[0].row;
        let a = audit_records(&s, row[0], &dup);
        assert!(!a.overlap_free && !a.development_exact);
        assert!(render_svg(&s, &recs).starts_with("<svg"));
    }
}
