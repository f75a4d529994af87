use std::collections::HashSet;
use std::sync::Arc;

use afpotts::lattice::{
    build_diced_patch, build_schlafli_patch, check_dual_distance, thick_set, to_text,
    Quadrangulation, Region, Sublattice,
};
use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::UnGraph;

fn labeled(q: &Quadrangulation) -> UnGraph<Sublattice, u8> {
    let mut g = UnGraph::new_undirected();
    let nodes: Vec<_> = (0..q.len() as u32)
        .map(|v| g.add_node(q.sublattice(v)))
        .collect();
    for (kind, edges) in [(0u8, q.g_edges()), (1, q.g0_edges()), (2, q.g1_edges())] {
        for &(a, b) in edges {
            g.add_edge(nodes[a as usize], nodes[b as usize], kind);
        }
    }
    g
}

#[test]
fn schlafli_six_matches_diced() {
    for r in 0..4 {
        let s = build_schlafli_patch(6, r).unwrap();
        let d = build_diced_patch(r);
        assert_eq!((s.n0(), s.n1()), (d.n0(), d.n1()), "radius {r}");
        assert!(
            is_isomorphic_matching(&labeled(&s), &labeled(&d), |a, b| a == b, |a, b| a == b),
            "radius {r}"
        );
    }
}

#[test]
fn heptagonal_patch_at_generation_cap() {
    let q = build_schlafli_patch(7, 6).unwrap();
    q.check_invariants().unwrap();
    for v in q.v0_ids().filter(|&v| q.is_interior(v)) {
        assert_eq!(q.neighbors0(v).len(), 7);
    }
    // ball sizes of {3,7} grow like 1, 7, 21, 56, ...
    let d = q.distances0(q.origin());
    let sphere = |k: u32| q.v0_ids().filter(|&v| d[v as usize] == k).count();
    assert_eq!((sphere(1), sphere(2), sphere(3)), (7, 21, 56));
}

/// All `G₁`-connected sets of interior `V₁` vertices of size at most `k`.
fn connected_sets(q: &Quadrangulation, k: usize) -> Vec<Vec<u32>> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut frontier: Vec<Vec<u32>> = q
        .v1_ids()
        .filter(|&v| q.is_interior(v))
        .map(|v| vec![v])
        .collect();
    let mut out = Vec::new();
    while let Some(set) = frontier.pop() {
        if !seen.insert(set.clone()) {
            continue;
        }
        if set.len() < k {
            for &v in &set {
                for &w in q.neighbors1(v) {
                    if q.is_interior(w) && !set.contains(&w) {
                        let mut s = set.clone();
                        s.push(w);
                        s.sort_unstable();
                        frontier.push(s);
                    }
                }
            }
        }
        out.push(set);
    }
    out
}

#[test]
fn thick_set_v0_part_is_g0_connected() {
    let q = build_diced_patch(5);
    let sets = connected_sets(&q, 4);
    assert!(sets.len() > 1000);
    for d1 in sets {
        let t = thick_set(&q, &d1).unwrap();
        assert_eq!(t.delta1, d1);
        let start = t.delta0[0];
        let mut reached = vec![start];
        let mut i = 0;
        while i < reached.len() {
            for &w in q.neighbors0(reached[i]) {
                if t.delta0.contains(&w) && !reached.contains(&w) {
                    reached.push(w);
                }
            }
            i += 1;
        }
        assert_eq!(reached.len(), t.delta0.len(), "Δ0 disconnected for {d1:?}");
    }
}

#[test]
fn dual_distance_bound_on_diced_patch() {
    let q = build_diced_patch(9);
    let report = check_dual_distance(&q, 4, 6);
    assert!(report.pairs_checked > 5000);
    assert_eq!(report.violations, 0);
    assert!(report.worst_slack <= 0);
}

#[test]
fn regions_on_diced_patch() {
    let q = Arc::new(build_diced_patch(6));
    let r = Region::ball(q.clone(), q.origin(), 2).unwrap();
    assert_eq!(r.lambda_v0().len(), 19);
    assert_eq!(r.lambda_v1().len(), 54);
    assert_eq!(r.boundary().len(), 18);
    assert!(r.boundary().iter().all(|&b| q.is_v0(b)));
    // every E_Λ edge has its other endpoint in Λ ∪ ∂Λ
    for &(a, b) in r.edges() {
        assert!(r.in_closure(a) && r.in_closure(b));
    }
}

#[test]
fn export_is_deterministic() {
    assert_eq!(
        to_text(&build_diced_patch(3)),
        to_text(&build_diced_patch(3))
    );
    let s = build_schlafli_patch(7, 2).unwrap();
    assert_eq!(to_text(&s), to_text(&build_schlafli_patch(7, 2).unwrap()));
}
