//! Self-avoiding polygons and paths on the honeycomb lattice `G₁` of the
//! diced lattice.

mod board;
pub mod oracle;
mod paths;
mod polygons;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

pub use board::{horizontal_crossing, Board, Cell};
pub use paths::{
    connective_estimate, counts_from_edge, enumerate_paths, start_edge_spread, ConnectiveEstimate,
    PathCountTable, HONEYCOMB_CONNECTIVE, PATH_GUARD,
};
pub use polygons::{
    collect_polygons, enumerate_p, enumerate_polygons, enumerate_q, max_anchor_bound, Census,
    DEFAULT_GUARD,
};

use crate::exact::ExactQuad;
use crate::lattice::Axial;
use crate::{Error, Result};

/// A simple circuit of the honeycomb lattice, as its cyclic vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polygon {
    cells: Vec<Cell>,
}

impl Polygon {
    /// Validates that `cells` is a simple closed walk of length at least 6.
    pub fn new(cells: Vec<Cell>) -> Result<Polygon> {
        let n = cells.len();
        if n < 6 {
            return Err(Error::InvalidInput(format!(
                "circuit of length {n} is shorter than 6"
            )));
        }
        let mut sorted = cells.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidInput("circuit revisits a vertex".into()));
        }
        for i in 0..n {
            if !cells[i].neighbors().contains(&cells[(i + 1) % n]) {
                return Err(Error::InvalidInput(format!(
                    "{:?} and {:?} are not adjacent",
                    cells[i],
                    cells[(i + 1) % n]
                )));
            }
        }
        Ok(Polygon { cells })
    }

    pub(crate) fn from_cells_unchecked(cells: Vec<Cell>) -> Polygon {
        Polygon { cells }
    }

    /// The elementary hexagon around the triangular vertex `v`.
    pub fn hexagon(v: Axial) -> Polygon {
        let (q, r) = v;
        Polygon {
            cells: vec![
                Cell::up(q, r),
                Cell::down(q - 1, r),
                Cell::up(q - 1, r),
                Cell::down(q - 1, r - 1),
                Cell::up(q, r - 1),
                Cell::down(q, r - 1),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Edges as `(up, down)` pairs, sorted.
    pub fn edges(&self) -> Vec<(Cell, Cell)> {
        let n = self.cells.len();
        let mut e: Vec<(Cell, Cell)> = (0..n)
            .map(|i| {
                let (a, b) = (self.cells[i], self.cells[(i + 1) % n]);
                if a.up {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        e.sort_unstable();
        e
    }

    /// Crossed horizontal triangular edges `(row, j)`, sorted.
    pub fn crossings(&self) -> Vec<(i32, i32)> {
        let mut c: Vec<(i32, i32)> = self
            .edges()
            .into_iter()
            .filter_map(|(u, d)| horizontal_crossing(u, d))
            .collect();
        c.sort_unstable();
        c
    }

    /// Enclosed triangular vertices, sorted by row then column.
    pub fn interior(&self) -> Vec<Axial> {
        let mut out = Vec::new();
        for pair in self.crossings().chunks(2) {
            let (row, a) = pair[0];
            let b = pair[1].1;
            out.extend((a + 1..=b).map(|q| (row, q)));
        }
        out.into_iter().map(|(r, q)| (q, r)).collect()
    }

    pub fn surrounds(&self, v: Axial) -> bool {
        self.crossings()
            .iter()
            .filter(|&&(row, j)| row == v.1 && j >= v.0)
            .count()
            % 2
            == 1
    }

    /// Index `k` of the first crossed edge `(v+k, v+k+1)` on the ray from `v` along `+q`.
    pub fn first_ray_crossing(&self, v: Axial) -> Option<u32> {
        self.crossings()
            .iter()
            .filter(|&&(row, j)| row == v.1 && j >= v.0)
            .map(|&(_, j)| (j - v.0) as u32)
            .min()
    }

    pub fn translate(&self, dq: i32, dr: i32) -> Polygon {
        Polygon {
            cells: self.cells.iter().map(|c| c.translate(dq, dr)).collect(),
        }
    }

    /// Translate whose lowest enclosed vertex is the origin.
    pub fn canonical(&self) -> Polygon {
        let (q, r) = self.interior()[0];
        self.translate(-q, -r)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CrossingReport {
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    /// Least `N − (k+1)` over polygons, where `k` is the first crossed ray edge.
    pub worst_margin: f64,
    /// `(L, k)` attaining the worst margin.
    pub worst: Option<(u32, u32)>,
}

impl CrossingReport {
    fn record(&mut self, l: u32, k: u32, count: u64, slack: f64) {
        // the polygon crosses edge number k+1 and must do so within the first ⌊N⌋
        let n = 1.0 + slack + l as f64 / 4.0;
        let margin = n - (k + 1) as f64;
        self.checked += count;
        if (k + 1) as f64 <= n.floor() {
            self.passed += count;
        } else {
            self.failed += count;
        }
        if self.worst.is_none() || margin < self.worst_margin {
            self.worst_margin = margin;
            self.worst = Some((l, k));
        }
    }
}

/// Checks that every polygon crosses one of the first `⌊1 + K + L/4⌋` edges
/// of the ray from `origin` along `+q`.
pub fn crossing_check(polygons: &[Polygon], origin: Axial, k: f64) -> Result<CrossingReport> {
    if k.is_nan() || k < 0.0 {
        return Err(Error::InvalidInput(format!(
            "K must be nonnegative, got {k}"
        )));
    }
    let mut report = CrossingReport::default();
    for p in polygons {
        if !p.surrounds(origin) {
            return Err(Error::InvalidInput(format!(
                "polygon through {:?} does not surround {origin:?}",
                p.cells[0]
            )));
        }
        let first = p
            .first_ray_crossing(origin)
            .expect("surrounding polygon crosses the ray");
        report.record(p.len() as u32, first, 1, k);
    }
    Ok(report)
}

/// [`crossing_check`] over every enumerated polygon, using the anchor counts.
pub fn crossing_check_census(census: &Census, k: f64) -> CrossingReport {
    let mut report = CrossingReport::default();
    for (&(l, a), &count) in &census.by_anchor {
        report.record(l, a, count, k);
    }
    report
}

/// Lengths where `q_L > (L²/36)(2+√2)^{(L−2)/2}`, decided in `ℚ[√2]`.
pub fn q_bound_violations(q: &BTreeMap<u32, BigUint>) -> Vec<u32> {
    let base = ExactQuad::from_integer(2) + ExactQuad::sqrt2();
    q.iter()
        .filter(|(&l, v)| {
            let bound = base.pow((l - 2) / 2)
                * ExactQuad::from_rational(BigRational::new((l * l).into(), 36.into()));
            let count =
                ExactQuad::from_rational(BigRational::from_integer(BigInt::from((*v).clone())));
            (bound - count).signum() < 0
        })
        .map(|(&l, _)| l)
        .collect()
}

/// Pairs `(L, M)` with `p_{L+M−2} < p_L p_M`, over nonzero `p_L, p_M`.
pub fn supermultiplicativity_violations(p: &BTreeMap<u32, BigUint>) -> Vec<(u32, u32)> {
    let mut bad = Vec::new();
    for (&l, pl) in p {
        for (&m, pm) in p.range(l..) {
            if let Some(plm) = p.get(&(l + m - 2)) {
                if plm < &(pl * pm) {
                    bad.push((l, m));
                }
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagon_encloses_its_centre() {
        let h = Polygon::new(Polygon::hexagon((2, -1)).cells().to_vec()).unwrap();
        assert_eq!(h.interior(), vec![(2, -1)]);
        assert!(h.surrounds((2, -1)));
        assert!(!h.surrounds((0, 0)));
        let h0 = Polygon::hexagon((0, 0));
        assert_eq!(h0.first_ray_crossing((0, 0)), Some(0));
        let r = crossing_check(&[h0], (0, 0), 0.0).unwrap();
        assert_eq!((r.checked, r.passed), (1, 1));
    }

    #[test]
    fn crossing_check_rejects_outsiders() {
        assert!(crossing_check(&[Polygon::hexagon((3, 3))], (0, 0), 0.0).is_err());
    }

    #[test]
    fn malformed_circuits_rejected() {
        let mut c = Polygon::hexagon((0, 0)).cells().to_vec();
        c.swap(0, 1);
        assert!(Polygon::new(c).is_err());
        assert!(Polygon::new(vec![Cell::up(0, 0), Cell::down(0, 0)]).is_err());
    }

    #[test]
    fn collected_polygons_agree_with_census() {
        let polys = collect_polygons(14).unwrap();
        let c = enumerate_polygons(14, DEFAULT_GUARD, crate::par::Execution::Sequential).unwrap();
        assert_eq!(polys.len() as u64, c.q.values().sum::<u64>());
        for p in &polys {
            let p = Polygon::new(p.cells().to_vec()).unwrap();
            assert!(p.surrounds((0, 0)));
            assert!(p.interior().contains(&(0, 0)));
        }
        let r = crossing_check(&polys, (0, 0), 0.0).unwrap();
        assert_eq!(r, crossing_check_census(&c, 0.0));
        assert_eq!(r.failed, 0);
    }

    #[test]
    fn enumerated_counts_respect_bounds() {
        let c = enumerate_polygons(20, DEFAULT_GUARD, crate::par::Execution::Sequential).unwrap();
        let t = c.table();
        assert!(q_bound_violations(t.q()).is_empty());
        let p: BTreeMap<u32, BigUint> = t
            .p()
            .iter()
            .filter(|(_, v)| **v > BigUint::default())
            .map(|(&l, v)| (l, v.clone()))
            .collect();
        assert!(supermultiplicativity_violations(&p).is_empty());
    }
}
