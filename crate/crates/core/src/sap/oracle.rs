//! Polygon counts from fixed polyhexes, independent of the circuit search.
//!
//! A hole-free polyhex of `n` cells and `s` internal adjacencies has a single
//! boundary circuit of length `6n − 2s`; that circuit surrounds exactly the
//! `n` triangular vertices at the cell centres. So each hole-free fixed
//! polyhex adds 1 to `p_L` and `n` to `q_L`. Polyhexes are generated with
//! Redelmeier's algorithm.

use std::collections::{BTreeMap, HashSet};

use crate::lattice::{Axial, AXIAL_DIRECTIONS};
use crate::{Error, Result};

/// Largest `L_max` the oracle accepts.
pub const ORACLE_MAX_L: u32 = 24;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleCounts {
    pub q: BTreeMap<u32, u64>,
    pub p: BTreeMap<u32, u64>,
    /// Fixed polyhexes (holes allowed) by size, index `n − 1`.
    pub fixed: Vec<u64>,
}

/// Fewest boundary edges of an `n`-cell polyhex.
pub fn min_perimeter(n: u32) -> u32 {
    let t = 12 * n as u64 - 3;
    let mut s = (t as f64).sqrt() as u64;
    while s * s < t {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= t {
        s -= 1;
    }
    2 * s as u32
}

fn valid(c: Axial) -> bool {
    c.1 > 0 || (c.1 == 0 && c.0 >= 0)
}

fn neighbors(c: Axial) -> impl Iterator<Item = Axial> {
    AXIAL_DIRECTIONS
        .into_iter()
        .map(move |(dq, dr)| (c.0 + dq, c.1 + dr))
}

fn has_hole(cells: &[Axial]) -> bool {
    let (q0, q1) = (
        cells.iter().map(|c| c.0).min().unwrap() - 1,
        cells.iter().map(|c| c.0).max().unwrap() + 1,
    );
    let (r0, r1) = (
        cells.iter().map(|c| c.1).min().unwrap() - 1,
        cells.iter().map(|c| c.1).max().unwrap() + 1,
    );
    let w = (q1 - q0 + 1) as usize;
    let h = (r1 - r0 + 1) as usize;
    let idx = |c: Axial| (c.1 - r0) as usize * w + (c.0 - q0) as usize;
    let mut seen = vec![false; w * h];
    for &c in cells {
        seen[idx(c)] = true;
    }
    let mut stack = vec![(q0, r0)];
    seen[idx((q0, r0))] = true;
    let mut reached = 1;
    while let Some(c) = stack.pop() {
        for n in neighbors(c) {
            if n.0 < q0 || n.0 > q1 || n.1 < r0 || n.1 > r1 || seen[idx(n)] {
                continue;
            }
            seen[idx(n)] = true;
            reached += 1;
            stack.push(n);
        }
    }
    reached + cells.len() < w * h
}

fn grow(
    poly: &mut Vec<Axial>,
    mut untried: Vec<Axial>,
    seen: &mut HashSet<Axial>,
    n_max: usize,
    visit: &mut impl FnMut(&[Axial]),
) {
    while let Some(c) = untried.pop() {
        poly.push(c);
        visit(poly);
        if poly.len() < n_max {
            let mut next = untried.clone();
            let mut added = Vec::new();
            for nb in neighbors(c) {
                if valid(nb) && seen.insert(nb) {
                    added.push(nb);
                    next.push(nb);
                }
            }
            grow(poly, next, seen, n_max, visit);
            for a in added {
                seen.remove(&a);
            }
        }
        poly.pop();
    }
}

/// Calls `visit` once for every fixed polyhex of at most `n_max` cells.
pub fn for_each_polyhex(n_max: usize, mut visit: impl FnMut(&[Axial])) {
    let mut seen = HashSet::from([(0, 0)]);
    grow(&mut Vec::new(), vec![(0, 0)], &mut seen, n_max, &mut visit);
}

/// `q_L`, `p_L` for even `6 ≤ L ≤ l_max` from hole-free polyhexes.
pub fn polyhex_counts(l_max: u32) -> Result<OracleCounts> {
    if l_max > ORACLE_MAX_L {
        return Err(Error::CapExceeded {
            what: "polyhex oracle".into(),
            needed: format!("L_max = {l_max}"),
            cap: ORACLE_MAX_L.to_string(),
        });
    }
    let mut n_max = 0;
    while min_perimeter(n_max as u32 + 1) <= l_max {
        n_max += 1;
    }
    let mut out = OracleCounts {
        q: (6..=l_max).step_by(2).map(|l| (l, 0)).collect(),
        p: (6..=l_max).step_by(2).map(|l| (l, 0)).collect(),
        fixed: vec![0; n_max],
    };
    for_each_polyhex(n_max, |cells| {
        let n = cells.len();
        out.fixed[n - 1] += 1;
        let set: HashSet<Axial> = cells.iter().copied().collect();
        let adj: usize = cells
            .iter()
            .map(|&c| neighbors(c).filter(|x| set.contains(x)).count())
            .sum::<usize>()
            / 2;
        let l = (6 * n - 2 * adj) as u32;
        if l <= l_max && !has_hole(cells) {
            *out.q.get_mut(&l).unwrap() += n as u64;
            *out.p.get_mut(&l).unwrap() += 1;
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_polyhex_counts() {
        let mut fixed = vec![0u64; 8];
        for_each_polyhex(8, |c| fixed[c.len() - 1] += 1);
        assert_eq!(fixed, [1, 3, 11, 44, 186, 814, 3652, 16689]);
    }

    #[test]
    fn perimeter_bounds() {
        assert_eq!(
            (1..=4).map(min_perimeter).collect::<Vec<_>>(),
            [6, 10, 12, 14]
        );
        assert_eq!(min_perimeter(7), 18);
    }

    #[test]
    fn small_polygon_counts() {
        let o = polyhex_counts(14).unwrap();
        assert_eq!(o.q.values().copied().collect::<Vec<_>>(), [1, 0, 6, 6, 39]);
        assert_eq!(o.p.values().copied().collect::<Vec<_>>(), [1, 0, 3, 2, 12]);
    }

    #[test]
    fn ring_has_hole() {
        let ring: Vec<Axial> = AXIAL_DIRECTIONS.to_vec();
        assert!(has_hole(&ring));
        assert!(!has_hole(&ring[..5]));
    }
}
