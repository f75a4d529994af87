//! Self-avoiding paths on the honeycomb lattice and the connective constant.
//!
//! A path of length `n` is a sequence of `n+1` distinct vertices; `C_n(a)`
//! counts those whose first edge is the directed edge `a`, so `C_1(a) = 1`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::board::{Board, Cell, NONE};
use crate::par::{self, Execution};
use crate::{Error, Result};

/// Largest `n_max` accepted by [`enumerate_paths`].
pub const PATH_GUARD: u32 = 34;
const SPLIT_DEPTH: u32 = 8;

/// √(2+√2), the honeycomb connective constant.
pub const HONEYCOMB_CONNECTIVE: f64 = 1.847_759_065_022_573_5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathCountTable {
    /// `n ↦ C_n*`.
    pub c_star: BTreeMap<u32, BigUint>,
}

impl PathCountTable {
    pub fn get(&self, n: u32) -> Option<&BigUint> {
        self.c_star.get(&n)
    }

    pub fn n_max(&self) -> u32 {
        self.c_star.keys().next_back().copied().unwrap_or(0)
    }

    /// Pairs `(m, n)` with `C*_{m+n−1} > C*_m C*_n`.
    pub fn submultiplicativity_violations(&self) -> Vec<(u32, u32)> {
        let mut bad = Vec::new();
        for (&m, cm) in &self.c_star {
            for (&n, cn) in self.c_star.range(m..) {
                if let Some(c) = self.c_star.get(&(m + n - 1)) {
                    if c > &(cm * cn) {
                        bad.push((m, n));
                    }
                }
            }
        }
        bad
    }

    /// `n` with `C*_{n+1} > 2^n`.
    pub fn power_bound_violations(&self) -> Vec<u32> {
        self.c_star
            .iter()
            .filter(|(&n, c)| n >= 2 && **c > BigUint::one() << (n - 1))
            .map(|(&n, _)| n - 1)
            .collect()
    }
}

fn walk(board: &Board, visited: &mut [bool], cur: u32, len: u32, n_max: u32, counts: &mut [u64]) {
    for &w in board.neighbors(cur) {
        if w == NONE || visited[w as usize] {
            continue;
        }
        counts[len as usize + 1] += 1;
        if len + 1 < n_max {
            visited[w as usize] = true;
            walk(board, visited, w, len + 1, n_max, counts);
            visited[w as usize] = false;
        }
    }
}

/// Path counts `C_1(a) … C_{n_max}(a)` for the directed edge `a = (from, to)`.
pub fn counts_from_edge(from: Cell, to: Cell, n_max: u32) -> Vec<u64> {
    let board = Board::new(n_max as i32 + from.q.abs().max(from.r.abs()) + 2);
    let (a, b) = (board.id(from).unwrap(), board.id(to).unwrap());
    let mut visited = vec![false; board.len()];
    visited[a as usize] = true;
    visited[b as usize] = true;
    let mut counts = vec![0u64; n_max as usize + 1];
    counts[1] = 1;
    if n_max > 1 {
        walk(&board, &mut visited, b, 1, n_max, &mut counts);
    }
    counts
}

/// Collects walks of exactly `depth` edges, adding shorter walks to `counts`.
fn prefixes(
    board: &Board,
    visited: &mut [bool],
    path: &mut Vec<u32>,
    depth: u32,
    out: &mut Vec<Vec<u32>>,
) {
    if path.len() as u32 - 1 == depth {
        out.push(path.clone());
        return;
    }
    let cur = *path.last().unwrap();
    for &w in board.neighbors(cur) {
        if w == NONE || visited[w as usize] {
            continue;
        }
        visited[w as usize] = true;
        path.push(w);
        prefixes(board, visited, path, depth, out);
        path.pop();
        visited[w as usize] = false;
    }
}

/// `C_n*` for `1 ≤ n ≤ n_max`, using the single start edge `U(0,0) → D(0,0)`;
/// the lattice is edge-transitive, see [`start_edge_spread`].
pub fn enumerate_paths(n_max: u32, exec: Execution) -> Result<PathCountTable> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    if n_max > PATH_GUARD {
        return Err(Error::CapExceeded {
            what: "path enumeration".into(),
            needed: format!("n_max = {n_max}"),
            cap: PATH_GUARD.to_string(),
        });
    }
    let board = Board::new(n_max as i32 + 2);
    let (a, b) = (
        board.id(Cell::up(0, 0)).unwrap(),
        board.id(Cell::down(0, 0)).unwrap(),
    );
    let mut counts = vec![0u64; n_max as usize + 1];
    let depth = SPLIT_DEPTH.min(n_max);
    let mut visited = vec![false; board.len()];
    visited[a as usize] = true;
    visited[b as usize] = true;
    let mut out = Vec::new();
    prefixes(&board, &mut visited, &mut vec![a, b], depth, &mut out);
    // walks shorter than the split depth are counted directly
    let short = counts_from_edge(Cell::up(0, 0), Cell::down(0, 0), depth);
    counts[..=depth as usize].copy_from_slice(&short);
    if n_max > depth {
        let parts = par::map(exec, out, |path| {
            let mut visited = vec![false; board.len()];
            for &v in &path {
                visited[v as usize] = true;
            }
            let mut c = vec![0u64; n_max as usize + 1];
            walk(
                &board,
                &mut visited,
                *path.last().unwrap(),
                depth,
                n_max,
                &mut c,
            );
            c
        });
        for c in parts {
            for (x, y) in counts.iter_mut().zip(c) {
                *x += y;
            }
        }
    }
    Ok(PathCountTable {
        c_star: (1..=n_max)
            .map(|n| (n, BigUint::from(counts[n as usize])))
            .collect(),
    })
}

/// Path counts from every directed edge between cells with `|q|, |r| ≤ 2`.
/// Returns the distinct count vectors seen; one entry means the choice of
/// start edge does not matter up to `n_max`.
pub fn start_edge_spread(n_max: u32) -> Vec<Vec<u64>> {
    let mut seen: Vec<Vec<u64>> = Vec::new();
    for q in -2..=2 {
        for r in -2..=2 {
            for up in [true, false] {
                let c = Cell { q, r, up };
                for n in c.neighbors() {
                    let v = counts_from_edge(c, n, n_max);
                    if !seen.contains(&v) {
                        seen.push(v);
                    }
                }
            }
        }
    }
    seen
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectiveEstimate {
    /// `(n, (C*_{n+1})^{1/n})`.
    pub roots: Vec<(u32, f64)>,
    pub running_inf: Vec<f64>,
    pub infimum: f64,
    pub infimum_below_two: bool,
    /// `C*_{n+1} ≤ 2^n` for every `n`, checked on integers.
    pub all_at_most_two: bool,
    /// `n` with `C*_{n+1} = 2^n` exactly.
    pub equal_to_two: Vec<u32>,
    /// Least `n` from which every root is strictly below 2.
    pub strict_from: Option<u32>,
}

pub fn connective_estimate(table: &PathCountTable) -> Result<ConnectiveEstimate> {
    if table.c_star.len() < 2 {
        return Err(Error::InvalidInput(
            "need C*_n for at least n = 1, 2".into(),
        ));
    }
    let mut roots = Vec::new();
    let mut running_inf = Vec::new();
    let mut inf = f64::INFINITY;
    let mut equal_to_two = Vec::new();
    let mut all_at_most_two = true;
    let mut strict_from = None;
    for (&m, c) in table.c_star.range(2..) {
        let n = m - 1;
        let two_n = BigUint::one() << n;
        match c.cmp(&two_n) {
            std::cmp::Ordering::Greater => {
                all_at_most_two = false;
                strict_from = None;
            }
            std::cmp::Ordering::Equal => {
                equal_to_two.push(n);
                strict_from = None;
            }
            std::cmp::Ordering::Less => {
                strict_from.get_or_insert(n);
            }
        }
        let root = c.to_f64().unwrap_or(f64::INFINITY).powf(1.0 / n as f64);
        inf = inf.min(root);
        roots.push((n, root));
        running_inf.push(inf);
    }
    Ok(ConnectiveEstimate {
        roots,
        running_inf,
        infimum: inf,
        infimum_below_two: strict_from.is_some(),
        all_at_most_two,
        equal_to_two,
        strict_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const KNOWN: [u64; 14] = [1, 2, 4, 8, 16, 30, 58, 112, 216, 406, 776, 1472, 2796, 5260];

    #[test]
    fn counts_match_honeycomb_walks() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let t = enumerate_paths(14, exec).unwrap();
            let got: Vec<u64> = t.c_star.values().map(|c| c.to_u64().unwrap()).collect();
            assert_eq!(got, KNOWN);
        }
        let t = enumerate_paths(3, Execution::Sequential).unwrap();
        assert_eq!(
            t.c_star
                .values()
                .map(|c| c.to_u64().unwrap())
                .collect::<Vec<_>>(),
            [1, 2, 4]
        );
    }

    #[test]
    fn one_start_edge_suffices() {
        assert_eq!(start_edge_spread(6).len(), 1);
    }

    #[test]
    fn roots_and_equality_cases() {
        let e = connective_estimate(&enumerate_paths(14, Execution::Sequential).unwrap()).unwrap();
        assert_eq!(e.equal_to_two, [1, 2, 3, 4]);
        assert_eq!(e.strict_from, Some(5));
        assert!(e.all_at_most_two && e.infimum_below_two);
        assert!((e.infimum - 5260f64.powf(1.0 / 13.0)).abs() < 1e-12);
        assert!(e.roots.iter().all(|&(_, r)| r >= 1.0));
    }

    #[test]
    fn multiplicative_bounds() {
        let t = enumerate_paths(14, Execution::Sequential).unwrap();
        assert!(t.submultiplicativity_violations().is_empty());
        assert!(t.power_bound_violations().is_empty());
    }
}
