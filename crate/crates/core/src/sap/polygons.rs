//! Self-avoiding polygons surrounding the origin of the triangular lattice.
//!
//! Every such circuit crosses the ray `(k,0)–(k+1,0)`, `k ≥ 0`, an odd number
//! of times. It is enumerated exactly once, anchored at its smallest crossed
//! ray edge `k`: the walk starts with `D(k,−1) → U(k,0)`, may not cross ray
//! edges below `k`, and is kept when it returns to `D(k,−1)` with an odd
//! number of ray crossings. A circuit through `(k+½, 0)` that winds around
//! the origin has Euclidean length at least `2k+1`, i.e. `3(2k+1)² ≤ L²`,
//! which bounds the anchors.
//!
//! Circuits whose lowest interior triangular vertex (by row, then column) is
//! the origin are the translation-class representatives, counted in `p_L`.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::board::{Board, Cell, NONE};
use super::Polygon;
use crate::par::{self, Execution};
use crate::series_io::{PolygonTable, Provenance};
use crate::{Error, Result};

/// Largest `L_max` accepted without an explicit override.
pub const DEFAULT_GUARD: u32 = 38;
/// Steps after the anchor edge at which the search is split into tasks; the
/// shortest circuit closes on the fifth, so no circuit ends inside a prefix.
const SPLIT_DEPTH: usize = 4;

/// Counts from one enumeration run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub l_max: u32,
    /// Circuits surrounding the origin, by length.
    pub q: BTreeMap<u32, u64>,
    /// Translation classes, by length.
    pub p: BTreeMap<u32, u64>,
    /// Sum over translation classes of the number of enclosed triangular vertices.
    pub area: BTreeMap<u32, u64>,
    /// Circuits by `(L, anchor)`.
    pub by_anchor: BTreeMap<(u32, u32), u64>,
}

impl Census {
    pub fn q_table(&self) -> PolygonTable {
        let q = self
            .q
            .iter()
            .map(|(&l, &v)| (l, BigUint::from(v)))
            .collect();
        PolygonTable::from_maps(q, BTreeMap::new(), Provenance::Enumerated)
            .expect("enumerated counts are valid")
    }

    pub fn table(&self) -> PolygonTable {
        let q = self
            .q
            .iter()
            .map(|(&l, &v)| (l, BigUint::from(v)))
            .collect();
        let p = self
            .p
            .iter()
            .map(|(&l, &v)| (l, BigUint::from(v)))
            .collect();
        PolygonTable::from_maps(q, p, Provenance::Enumerated).expect("enumerated counts are valid")
    }

    /// Lengths where `q_L` differs from the area-weighted class count.
    pub fn area_mismatches(&self) -> Vec<u32> {
        self.q
            .iter()
            .filter(|(l, &v)| self.area.get(l).copied().unwrap_or(0) != v)
            .map(|(&l, _)| l)
            .collect()
    }

    /// Largest anchor seen for each length.
    pub fn max_anchor(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &(l, k) in self.by_anchor.keys() {
            let e = m.entry(l).or_insert(k);
            *e = (*e).max(k);
        }
        m
    }
}

#[derive(Default)]
struct Tally {
    q: Vec<u64>,
    p: Vec<u64>,
    area: Vec<u64>,
    by_anchor: BTreeMap<(u32, u32), u64>,
}

impl Tally {
    fn new(l_max: u32) -> Tally {
        let n = l_max as usize + 1;
        Tally {
            q: vec![0; n],
            p: vec![0; n],
            area: vec![0; n],
            by_anchor: BTreeMap::new(),
        }
    }

    fn absorb(&mut self, o: Tally) {
        for (a, b) in [
            (&mut self.q, o.q),
            (&mut self.p, o.p),
            (&mut self.area, o.area),
        ] {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for (k, v) in o.by_anchor {
            *self.by_anchor.entry(k).or_default() += v;
        }
    }
}

/// Largest anchor that a circuit of length at most `l_max` can have.
pub fn max_anchor_bound(l_max: u32) -> u32 {
    let l2 = (l_max as u64).pow(2);
    let mut k = 0u64;
    while 3 * (2 * (k + 1) + 1).pow(2) <= l2 {
        k += 1;
    }
    k as u32
}

/// Enumeration box and per-anchor distance tables.
pub(crate) struct Setup {
    pub board: Board,
    pub l_max: u32,
    pub dist: Vec<Vec<u32>>,
}

impl Setup {
    pub fn new(l_max: u32) -> Setup {
        let k_max = max_anchor_bound(l_max);
        // every vertex within graph distance L/2 of a start, and its geodesics, fits
        let board = Board::new(k_max as i32 + l_max as i32 / 2 + 4);
        let dist = (0..=k_max)
            .map(|k| board.distances(board.id(Cell::down(k as i32, -1)).unwrap()))
            .collect();
        Setup { board, l_max, dist }
    }
}

pub(crate) struct Search<'a> {
    board: &'a Board,
    dist: &'a [u32],
    l_max: u32,
    k: i32,
    start: u32,
    visited: Vec<bool>,
    pub path: Vec<u32>,
    pub crossings: Vec<(i32, i32)>,
    parity: bool,
}

impl<'a> Search<'a> {
    pub fn new(setup: &'a Setup, k: u32) -> Search<'a> {
        let board = &setup.board;
        let start = board.id(Cell::down(k as i32, -1)).unwrap();
        let first = board.id(Cell::up(k as i32, 0)).unwrap();
        let mut visited = vec![false; board.len()];
        visited[start as usize] = true;
        visited[first as usize] = true;
        Search {
            board,
            dist: &setup.dist[k as usize],
            l_max: setup.l_max,
            k: k as i32,
            start,
            visited,
            path: vec![start, first],
            crossings: vec![(0, k as i32)],
            parity: true,
        }
    }

    /// Target of `slot` from the walk's end if the step is admissible.
    #[inline]
    fn admissible(&self, slot: usize) -> Option<u32> {
        let cur = *self.path.last().unwrap();
        let nxt = self.board.neighbors(cur)[slot];
        if nxt == NONE || self.visited[nxt as usize] {
            return None;
        }
        if self.path.len() as u32 + self.dist[nxt as usize] > self.l_max {
            return None;
        }
        if let Some((0, j)) = self.board.crossing(cur, slot) {
            if (0..self.k).contains(&j) {
                return None;
            }
        }
        Some(nxt)
    }

    fn push(&mut self, slot: usize, nxt: u32) {
        let cur = *self.path.last().unwrap();
        if let Some(c) = self.board.crossing(cur, slot) {
            self.crossings.push(c);
            if c.0 == 0 && c.1 >= self.k {
                self.parity = !self.parity;
            }
        }
        self.visited[nxt as usize] = true;
        self.path.push(nxt);
    }

    fn pop(&mut self, slot: usize) {
        let nxt = self.path.pop().unwrap();
        self.visited[nxt as usize] = false;
        let cur = *self.path.last().unwrap();
        if self.board.crossing(cur, slot).is_some() {
            let c = self.crossings.pop().unwrap();
            if c.0 == 0 && c.1 >= self.k {
                self.parity = !self.parity;
            }
        }
    }

    fn closes(&self, slot: usize) -> bool {
        let cur = *self.path.last().unwrap();
        self.board.neighbors(cur)[slot] == self.start && self.path.len() >= 6 && self.parity
    }

    /// Calls `f(self, L)` for every circuit extending the current walk.
    pub fn run(&mut self, f: &mut impl FnMut(&Search<'a>, u32)) {
        for slot in 0..3 {
            if self.closes(slot) {
                f(self, self.path.len() as u32);
            } else if let Some(nxt) = self.admissible(slot) {
                self.push(slot, nxt);
                self.run(f);
                self.pop(slot);
            }
        }
    }

    /// Slot sequences of all admissible walks `depth` steps longer than the current one.
    fn prefixes(&mut self, depth: usize, stack: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if depth == 0 {
            out.push(stack.clone());
            return;
        }
        for slot in 0..3 {
            if let Some(nxt) = self.admissible(slot) {
                stack.push(slot as u8);
                self.push(slot, nxt);
                self.prefixes(depth - 1, stack, out);
                self.pop(slot);
                stack.pop();
            }
        }
    }

    fn replay(&mut self, slots: &[u8]) {
        for &s in slots {
            let nxt = self
                .admissible(s as usize)
                .expect("replayed prefix is admissible");
            self.push(s as usize, nxt);
        }
    }

    pub fn cells(&self) -> Vec<Cell> {
        self.path.iter().map(|&v| self.board.cell(v)).collect()
    }
}

/// Number of triangular vertices enclosed by a circuit with these horizontal
/// crossings, and whether the origin is its lowest enclosed vertex.
pub(crate) fn interior_summary(crossings: &[(i32, i32)]) -> (u64, bool) {
    let mut cs = crossings.to_vec();
    cs.sort_unstable();
    let canonical = cs.first().is_some_and(|&c| c == (0, -1));
    let mut area = 0u64;
    for pair in cs.chunks(2) {
        debug_assert_eq!(pair[0].0, pair[1].0, "odd crossing count in a row");
        area += (pair[1].1 - pair[0].1) as u64;
    }
    (area, canonical)
}

fn check_l_max(l_max: u32, guard: u32) -> Result<()> {
    if l_max < 6 || l_max % 2 == 1 {
        return Err(Error::InvalidInput(format!(
            "L_max must be even and at least 6, got {l_max}"
        )));
    }
    if l_max > guard {
        return Err(Error::CapExceeded {
            what: "polygon enumeration".into(),
            needed: format!("L_max = {l_max}"),
            cap: guard.to_string(),
        });
    }
    Ok(())
}

/// Counts circuits of every even length up to `l_max`; `guard` caps `l_max`.
pub fn enumerate_polygons(l_max: u32, guard: u32, exec: Execution) -> Result<Census> {
    check_l_max(l_max, guard)?;
    let setup = Setup::new(l_max);
    let mut tasks: Vec<(u32, Vec<u8>)> = Vec::new();
    for k in 0..=max_anchor_bound(l_max) {
        let mut s = Search::new(&setup, k);
        let mut out = Vec::new();
        s.prefixes(SPLIT_DEPTH, &mut Vec::new(), &mut out);
        tasks.extend(out.into_iter().map(|p| (k, p)));
    }
    let tallies = par::map(exec, tasks, |(k, prefix)| {
        let mut t = Tally::new(l_max);
        let mut s = Search::new(&setup, k);
        s.replay(&prefix);
        s.run(&mut |s, l| {
            t.q[l as usize] += 1;
            *t.by_anchor.entry((l, k)).or_default() += 1;
            let (area, canonical) = interior_summary(&s.crossings);
            if canonical {
                t.p[l as usize] += 1;
                t.area[l as usize] += area;
            }
        });
        t
    });
    let mut total = Tally::new(l_max);
    for t in tallies {
        total.absorb(t);
    }
    let lengths = (6..=l_max).step_by(2);
    Ok(Census {
        l_max,
        q: lengths.clone().map(|l| (l, total.q[l as usize])).collect(),
        p: lengths.clone().map(|l| (l, total.p[l as usize])).collect(),
        area: lengths.map(|l| (l, total.area[l as usize])).collect(),
        by_anchor: total.by_anchor,
    })
}

/// `q_L` for even `6 ≤ L ≤ l_max`.
pub fn enumerate_q(l_max: u32, exec: Execution) -> Result<PolygonTable> {
    Ok(enumerate_polygons(l_max, DEFAULT_GUARD, exec)?.q_table())
}

/// `q_L` and `p_L` for even `6 ≤ L ≤ l_max`.
pub fn enumerate_p(l_max: u32, exec: Execution) -> Result<PolygonTable> {
    Ok(enumerate_polygons(l_max, DEFAULT_GUARD, exec)?.table())
}

/// Every circuit of length at most `l_max` surrounding the origin.
pub fn collect_polygons(l_max: u32) -> Result<Vec<Polygon>> {
    check_l_max(l_max, 26)?;
    let setup = Setup::new(l_max);
    let mut out = Vec::new();
    for k in 0..=max_anchor_bound(l_max) {
        Search::new(&setup, k).run(&mut |s, _| out.push(Polygon::from_cells_unchecked(s.cells())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let c = enumerate_polygons(14, DEFAULT_GUARD, Execution::Sequential).unwrap();
        let q: Vec<u64> = c.q.values().copied().collect();
        let p: Vec<u64> = c.p.values().copied().collect();
        assert_eq!(q, [1, 0, 6, 6, 39]);
        assert_eq!(p, [1, 0, 3, 2, 12]);
        assert!(c.area_mismatches().is_empty());
    }

    #[test]
    fn split_does_not_change_totals() {
        let a = enumerate_polygons(18, DEFAULT_GUARD, Execution::Sequential).unwrap();
        let b = enumerate_polygons(18, DEFAULT_GUARD, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(enumerate_q(7, Execution::Sequential).is_err());
        assert!(enumerate_q(4, Execution::Sequential).is_err());
        assert!(matches!(
            enumerate_q(40, Execution::Sequential),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn anchor_bound() {
        assert_eq!(max_anchor_bound(6), 1);
        assert_eq!(max_anchor_bound(22), 5);
    }
}
