use std::sync::Arc;

use afpotts::contour::{
    compare_pushforward, contour_measure, contour_statistics, peierls_violations, pushforward,
    DEFAULT_V1_CAP,
};
use afpotts::exact::{int, rat};
use afpotts::gibbs::{
    comparison_check, enumerate_measure, es_identities, region_from_axial_seed, Event, DEFAULT_CAP,
};
use afpotts::lattice::{build_diced_patch, Quadrangulation, Region};
use afpotts::par::Execution;
use afpotts::Beta;

fn patch() -> Arc<Quadrangulation> {
    Arc::new(build_diced_patch(5))
}

fn triangle_region(q: &Arc<Quadrangulation>) -> Region {
    region_from_axial_seed(q, &[(0, 0), (1, 0), (0, 1)]).unwrap()
}

fn betas() -> Vec<Beta> {
    ["inf", "2", "1", "0.5"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

#[test]
fn pushforward_equals_contour_measure() {
    let q = patch();
    for r in [
        Region::star(q.clone(), q.origin()).unwrap(),
        region_from_axial_seed(&q, &[(0, 0), (1, 0)]).unwrap(),
        triangle_region(&q),
    ] {
        let m = enumerate_measure(&r, DEFAULT_CAP, Execution::Parallel).unwrap();
        let cm = contour_measure(&r, DEFAULT_V1_CAP, Execution::Parallel).unwrap();
        let rep = compare_pushforward(&cm, &m, &betas()).unwrap();
        assert!(rep.exact, "{:?}", rep.mismatches);
        assert!(rep.max_deviation < 1e-12);
        // ground states per contour configuration: 2^{#Γ} 2^{|V1∩Λ| − |Γ|}
        let n1 = r.lambda_v1().len() as u32;
        let push = pushforward(&m).unwrap();
        for c in cm
            .configs()
            .iter()
            .filter(|c| c.set.contours.iter().all(|g| g.is_simple()))
        {
            let ground = push.get(&c.set.edges()).map(|w| w.coeff(0)).unwrap_or(0);
            let want = 1i128 << (c.set.len() as u32 + n1 - c.set.total_length() as u32);
            assert_eq!(ground, want);
        }
        for b in &betas() {
            assert!(peierls_violations(&cm, b).is_empty(), "beta {b}");
        }
    }
}

#[test]
fn edwards_sokal_identities_on_capped_regions() {
    let q = patch();
    let grid = [Beta::Finite(rat(1, 2)), Beta::Finite(int(2))];
    for (r, sets) in [
        (
            region_from_axial_seed(&q, &[(0, 0), (1, 0)]).unwrap(),
            vec![vec![(0, 0)], vec![(0, 0), (1, 0)]],
        ),
        (triangle_region(&q), vec![vec![(0, 0), (1, 0), (0, 1)]]),
    ] {
        let m = enumerate_measure(&r, DEFAULT_CAP, Execution::Parallel).unwrap();
        let d0s: Vec<Vec<u32>> = sets
            .iter()
            .map(|s| s.iter().map(|&a| q.v0_at(a).unwrap()).collect())
            .collect();
        let checks = es_identities(&m, &d0s, &grid, Execution::Parallel).unwrap();
        for c in &checks {
            assert!(c.exact && c.max_deviation < 1e-12, "{}", c.name);
        }
    }
}

#[test]
fn comparison_lemma_holds_across_beta() {
    let q = patch();
    let r = triangle_region(&q);
    let o = q.origin();
    let tri = *q
        .neighbors(o)
        .iter()
        .find(|&&w| q.neighbors(w).iter().all(|&u| r.contains(u)))
        .unwrap();
    let beta0 = Beta::Finite(int(1));
    for b in ["1", "2", "5", "inf"] {
        let rep =
            comparison_check(&r, &[tri], &beta0, &b.parse().unwrap(), Execution::Parallel).unwrap();
        assert!(rep.holds, "beta {b}");
    }
    let rep = comparison_check(
        &r,
        &[tri],
        &Beta::Finite(int(5)),
        &Beta::Infinite,
        Execution::Sequential,
    )
    .unwrap();
    assert!(rep.holds);
}

#[test]
fn long_range_direction_and_uniform_positivity() {
    let q = patch();
    let r = triangle_region(&q);
    let m = enumerate_measure(&r, DEFAULT_CAP, Execution::Parallel).unwrap();
    let d0: Vec<u32> = [(0, 0), (1, 0), (0, 1)]
        .iter()
        .map(|&a| q.v0_at(a).unwrap())
        .collect();
    for b in [Beta::Finite(int(4)), Beta::Infinite] {
        let c = m
            .conditional(
                &Event::UniformIn(d0.clone(), 1),
                &Event::Uniform(d0.clone()),
            )
            .unwrap();
        assert!(c.eval(&b, 128).lo() > &rat(1, 3));
        assert!(
            m.probability(&Event::Uniform(d0.clone()))
                .eval(&b, 128)
                .lo()
                > &int(0)
        );
    }
}

#[test]
fn nonsimple_contours_are_rare() {
    let q = patch();
    let r = triangle_region(&q);
    let cm = contour_measure(&r, DEFAULT_V1_CAP, Execution::Parallel).unwrap();
    let s = contour_statistics(&cm, q.origin()).unwrap();
    assert_eq!(s.nonsimple_surrounding.at_infinity(), int(0));
    let scaled: Vec<f64> = [2, 3, 4]
        .iter()
        .map(|&b| s.nonsimple_surrounding.eval_f64(&Beta::Finite(int(b))) * (2.0 * b as f64).exp())
        .collect();
    assert!(
        scaled.iter().all(|&v| v.is_finite() && v < 50.0),
        "{scaled:?}"
    );
}
