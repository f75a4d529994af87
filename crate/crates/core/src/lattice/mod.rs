//! Finite patches of bipartite plane quadrangulations built from a
//! triangulation `G₀` and its dual `G₁`.
//!
//! Vertex ids are dense: `0..n0` are `V₀` (triangulation vertices) and
//! `n0..n0+n1` are `V₁` (triangles). Edge lists are sorted.

mod diced;
mod export;
mod region;
mod schlafli;

pub use diced::{axial_distance, build_diced_patch, Axial, AXIAL_DIRECTIONS};
pub use export::to_text;
pub use region::{thick_set, Region, RegionSummary, ThickSet};
pub use schlafli::{build_schlafli_patch, MAX_HYPERBOLIC_GENERATIONS};

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sublattice {
    V0,
    V1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Geometry {
    Euclidean,
    PoincareDisk,
}

/// Marker for unreachable vertices in BFS distance vectors.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct Quadrangulation {
    n0: usize,
    n1: usize,
    coords: Vec<[f64; 2]>,
    geometry: Geometry,
    g_edges: Vec<(u32, u32)>,
    g0_edges: Vec<(u32, u32)>,
    g1_edges: Vec<(u32, u32)>,
    dual0: Vec<u32>,
    dual1: Vec<u32>,
    adj: Vec<Vec<u32>>,
    adj0: Vec<Vec<u32>>,
    adj1: Vec<Vec<u32>>,
    g0_index: HashMap<(u32, u32), u32>,
    g1_index: HashMap<(u32, u32), u32>,
    interior: Vec<bool>,
    origin: u32,
    axial: Option<Vec<Axial>>,
}

fn key(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Quadrangulation {
    /// Build the patch from a piece of triangulation.
    ///
    /// `points` are candidate `V₀` vertices, of which those with `in_patch`
    /// become `V₀` of the patch (ids in input order); `triangles` become `V₁`
    /// (ids in input order) and must each touch at least one patch vertex.
    /// `G₀` edges join patch vertices that share a triangle, `G₁` edges join
    /// triangles sharing such an edge.
    pub(crate) fn from_triangulation(
        points: &[[f64; 2]],
        in_patch: &[bool],
        triangles: &[[usize; 3]],
        origin: usize,
        geometry: Geometry,
    ) -> Self {
        let mut v0_id = vec![u32::MAX; points.len()];
        let mut coords = Vec::new();
        for (i, p) in points.iter().enumerate() {
            if in_patch[i] {
                v0_id[i] = coords.len() as u32;
                coords.push(*p);
            }
        }
        let n0 = coords.len();
        let n1 = triangles.len();
        for t in triangles {
            let c = t.iter().fold([0.0, 0.0], |acc, &i| {
                [acc[0] + points[i][0], acc[1] + points[i][1]]
            });
            coords.push([c[0] / 3.0, c[1] / 3.0]);
        }

        // triangles incident to each candidate edge
        let mut edge_tris: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (ti, t) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let e = if a < b { (a, b) } else { (b, a) };
                edge_tris.entry(e).or_default().push(ti);
            }
        }

        let mut g_edges = Vec::new();
        for (ti, t) in triangles.iter().enumerate() {
            for &i in t {
                if in_patch[i] {
                    g_edges.push((v0_id[i], (n0 + ti) as u32));
                }
            }
        }
        g_edges.sort_unstable();
        g_edges.dedup();

        let mut pairs: Vec<((u32, u32), (u32, u32))> = Vec::new();
        for (&(a, b), tris) in &edge_tris {
            if !(in_patch[a] && in_patch[b]) {
                continue;
            }
            assert_eq!(tris.len(), 2, "patch edge without both adjacent triangles");
            let e0 = key(v0_id[a], v0_id[b]);
            let e1 = key((n0 + tris[0]) as u32, (n0 + tris[1]) as u32);
            pairs.push((e0, e1));
        }
        let mut g0_edges: Vec<(u32, u32)> = pairs.iter().map(|p| p.0).collect();
        let mut g1_edges: Vec<(u32, u32)> = pairs.iter().map(|p| p.1).collect();
        g0_edges.sort_unstable();
        g1_edges.sort_unstable();
        let g0_index: HashMap<(u32, u32), u32> = g0_edges
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u32))
            .collect();
        let g1_index: HashMap<(u32, u32), u32> = g1_edges
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u32))
            .collect();
        let mut dual0 = vec![0u32; g0_edges.len()];
        let mut dual1 = vec![0u32; g1_edges.len()];
        for (e0, e1) in &pairs {
            let i0 = g0_index[e0];
            let i1 = g1_index[e1];
            dual0[i0 as usize] = i1;
            dual1[i1 as usize] = i0;
        }

        let n = n0 + n1;
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &g_edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        let mut adj0 = vec![Vec::new(); n];
        for &(a, b) in &g0_edges {
            adj0[a as usize].push(b);
            adj0[b as usize].push(a);
        }
        let mut adj1 = vec![Vec::new(); n];
        for &(a, b) in &g1_edges {
            adj1[a as usize].push(b);
            adj1[b as usize].push(a);
        }
        for l in adj.iter_mut().chain(adj0.iter_mut()).chain(adj1.iter_mut()) {
            l.sort_unstable();
        }

        // interior: the full neighbourhood of the vertex is present
        let mut interior = vec![false; n];
        let mut fan: HashMap<usize, Vec<usize>> = HashMap::new();
        for (ti, t) in triangles.iter().enumerate() {
            for &i in t {
                fan.entry(i).or_default().push(ti);
            }
        }
        for (i, &inside) in in_patch.iter().enumerate() {
            if !inside {
                continue;
            }
            let tris = fan.get(&i).map(Vec::as_slice).unwrap_or(&[]);
            let mut closed = !tris.is_empty();
            for &ti in tris {
                for &j in &triangles[ti] {
                    if j == i {
                        continue;
                    }
                    let e = if i < j { (i, j) } else { (j, i) };
                    if !in_patch[j] || edge_tris.get(&e).map_or(0, Vec::len) != 2 {
                        closed = false;
                    }
                }
            }
            interior[v0_id[i] as usize] = closed;
        }
        for (ti, t) in triangles.iter().enumerate() {
            let corners_inside = t.iter().all(|&i| in_patch[i]);
            let all_shared = (0..3).all(|k| {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let e = if a < b { (a, b) } else { (b, a) };
                edge_tris[&e].len() == 2
            });
            interior[n0 + ti] = corners_inside && all_shared;
        }

        Quadrangulation {
            n0,
            n1,
            coords,
            geometry,
            g_edges,
            g0_edges,
            g1_edges,
            dual0,
            dual1,
            adj,
            adj0,
            adj1,
            g0_index,
            g1_index,
            interior,
            origin: v0_id[origin],
            axial: None,
        }
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn len(&self) -> usize {
        self.n0 + self.n1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sublattice(&self, v: u32) -> Sublattice {
        if (v as usize) < self.n0 {
            Sublattice::V0
        } else {
            Sublattice::V1
        }
    }

    pub fn is_v0(&self, v: u32) -> bool {
        (v as usize) < self.n0
    }

    pub fn v0_ids(&self) -> std::ops::Range<u32> {
        0..self.n0 as u32
    }

    pub fn v1_ids(&self) -> std::ops::Range<u32> {
        self.n0 as u32..(self.n0 + self.n1) as u32
    }

    pub fn coords(&self, v: u32) -> [f64; 2] {
        self.coords[v as usize]
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Designated origin vertex of `V₀`.
    pub fn origin(&self) -> u32 {
        self.origin
    }

    pub fn is_interior(&self, v: u32) -> bool {
        self.interior[v as usize]
    }

    /// Edges of `G` as `(V₀ id, V₁ id)`.
    pub fn g_edges(&self) -> &[(u32, u32)] {
        &self.g_edges
    }

    pub fn g0_edges(&self) -> &[(u32, u32)] {
        &self.g0_edges
    }

    pub fn g1_edges(&self) -> &[(u32, u32)] {
        &self.g1_edges
    }

    /// Neighbours in `G`.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    /// Neighbours in `G₀` (empty for `V₁` vertices).
    pub fn neighbors0(&self, v: u32) -> &[u32] {
        &self.adj0[v as usize]
    }

    /// Neighbours in `G₁` (empty for `V₀` vertices).
    pub fn neighbors1(&self, v: u32) -> &[u32] {
        &self.adj1[v as usize]
    }

    pub fn g0_edge_index(&self, a: u32, b: u32) -> Option<u32> {
        self.g0_index.get(&key(a, b)).copied()
    }

    pub fn g1_edge_index(&self, a: u32, b: u32) -> Option<u32> {
        self.g1_index.get(&key(a, b)).copied()
    }

    /// Index of the `G₁` edge crossing `G₀` edge `e0`.
    pub fn dual_of_g0(&self, e0: u32) -> u32 {
        self.dual0[e0 as usize]
    }

    /// Index of the `G₀` edge crossing `G₁` edge `e1`.
    pub fn dual_of_g1(&self, e1: u32) -> u32 {
        self.dual1[e1 as usize]
    }

    /// Axial coordinates of a `V₀` vertex of a diced patch.
    pub fn axial(&self, v: u32) -> Option<Axial> {
        self.axial.as_ref()?.get(v as usize).copied()
    }

    pub fn v0_at(&self, a: Axial) -> Option<u32> {
        let ax = self.axial.as_ref()?;
        ax.iter().position(|&b| b == a).map(|i| i as u32)
    }

    /// BFS distances in `G` from `src`.
    pub fn distances(&self, src: u32) -> Vec<u32> {
        bfs(&self.adj, &[src])
    }

    /// BFS distances in `G₀` from a `V₀` vertex.
    pub fn distances0(&self, src: u32) -> Vec<u32> {
        bfs(&self.adj0, &[src])
    }

    /// BFS distances in `G₁` from a `V₁` vertex.
    pub fn distances1(&self, src: u32) -> Vec<u32> {
        bfs(&self.adj1, &[src])
    }

    /// Check the structural invariants of the patch.
    pub fn check_invariants(&self) -> Result<()> {
        for &(a, b) in &self.g_edges {
            if !(self.is_v0(a) && !self.is_v0(b)) {
                return Err(Error::Invariant(format!("G edge {a}-{b} is not V0-V1")));
            }
        }
        for v in self.v1_ids() {
            if self.is_interior(v) && self.adj[v as usize].len() != 3 {
                return Err(Error::Invariant(format!(
                    "interior V1 vertex {v} has G-degree != 3"
                )));
            }
        }
        for (i0, &(a, b)) in self.g0_edges.iter().enumerate() {
            let i1 = self.dual0[i0];
            if self.dual1[i1 as usize] != i0 as u32 {
                return Err(Error::Invariant(format!(
                    "dual map not an involution at {i0}"
                )));
            }
            let (s, t) = self.g1_edges[i1 as usize];
            // face a-s-b-t of G must be a quadrilateral with 4 distinct G edges
            for (u, w) in [(a, s), (s, b), (b, t), (t, a)] {
                let e = if self.is_v0(u) { (u, w) } else { (w, u) };
                if self.g_edges.binary_search(&e).is_err() {
                    return Err(Error::Invariant(format!(
                        "face around G0 edge {a}-{b} is not a quadrilateral"
                    )));
                }
            }
            if s == t || a == b {
                return Err(Error::Invariant("degenerate face".into()));
            }
        }
        Ok(())
    }
}

/// Multi-source BFS over an adjacency list.
pub fn bfs(adj: &[Vec<u32>], sources: &[u32]) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s as usize] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize];
        for &w in &adj[v as usize] {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = d + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Edge distance: one plus the smallest distance between endpoints, or 0
/// for equal edges. `da`, `db` are BFS distances from the endpoints of `e`.
pub fn edge_distance(e: (u32, u32), f: (u32, u32), da: &[u32], db: &[u32]) -> u32 {
    if key(e.0, e.1) == key(f.0, f.1) {
        return 0;
    }
    let m = [
        da[f.0 as usize],
        da[f.1 as usize],
        db[f.0 as usize],
        db[f.1 as usize],
    ]
    .into_iter()
    .min()
    .unwrap();
    m.saturating_add(1)
}

/// Result of checking `d(e†,f†) ≤ (d_max/2 − 1)·d(e,f) + 1` over edge pairs.
#[derive(Clone, Debug, Serialize)]
pub struct DualDistanceReport {
    pub pairs_checked: u64,
    pub violations: u64,
    /// Largest `d(e†,f†) − (c·d(e,f) + 1)` seen (nonpositive when the bound holds).
    pub worst_slack: i64,
}

/// Check the dual-distance bound for all pairs of `G₀` edges whose endpoints
/// lie within `G₀`-distance `inner` of the origin, with `d_max` the largest
/// `G₀` degree. Distances are BFS distances inside the patch, so `inner`
/// should leave a wide margin to the rim.
pub fn check_dual_distance(quad: &Quadrangulation, inner: u32, d_max: u32) -> DualDistanceReport {
    let d0 = quad.distances0(quad.origin());
    let edges: Vec<u32> = (0..quad.g0_edges().len() as u32)
        .filter(|&i| {
            let (a, b) = quad.g0_edges()[i as usize];
            d0[a as usize] <= inner && d0[b as usize] <= inner
        })
        .collect();
    let dist: Vec<Vec<u32>> = (0..quad.len() as u32)
        .map(|v| {
            if quad.is_v0(v) {
                quad.distances0(v)
            } else {
                quad.distances1(v)
            }
        })
        .collect();
    let mut report = DualDistanceReport {
        pairs_checked: 0,
        violations: 0,
        worst_slack: i64::MIN,
    };
    for (i, &e) in edges.iter().enumerate() {
        for &f in &edges[i..] {
            let ee = quad.g0_edges()[e as usize];
            let ff = quad.g0_edges()[f as usize];
            let ed = edge_distance(ee, ff, &dist[ee.0 as usize], &dist[ee.1 as usize]);
            let de = quad.g1_edges()[quad.dual_of_g0(e) as usize];
            let df = quad.g1_edges()[quad.dual_of_g0(f) as usize];
            let dd = edge_distance(de, df, &dist[de.0 as usize], &dist[de.1 as usize]);
            // c = d_max/2 - 1, kept doubled to stay integral
            let bound2 = (d_max as i64 - 2) * ed as i64 + 2;
            let slack2 = 2 * dd as i64 - bound2;
            report.pairs_checked += 1;
            if slack2 > 0 {
                report.violations += 1;
            }
            report.worst_slack = report.worst_slack.max(slack2.div_euclid(2));
        }
    }
    report
}
