use std::sync::Arc;

use afpotts::exact::{rat, Poly, PolyRatio};
use afpotts::gibbs::{enumerate_measure, es_joint, region_from_axial_seed, Event, DEFAULT_CAP};
use afpotts::lattice::{build_diced_patch, Region};
use afpotts::montecarlo::{run_experiment, Chain, Observable, Schedule};
use afpotts::par::Execution;
use afpotts::Beta;

fn schedule(sweeps: u64, seed: u64) -> Schedule {
    Schedule {
        sweeps,
        thermalization: sweeps / 10,
        metropolis_per_wsk: 1,
        local_only: false,
        chains: 4,
        seed,
    }
}

fn check_against_exact(r: &Region, beta: &Beta, d0: &[u32]) {
    let m = enumerate_measure(r, DEFAULT_CAP, Execution::Parallel).unwrap();
    let marg = m.marginals();
    let mut obs = Vec::new();
    let mut exact = Vec::new();
    for (i, &v) in r.lambda().iter().enumerate() {
        for k in 1..=3u8 {
            obs.push(Observable::Marginal {
                vertex: v,
                color: k,
            });
            exact.push(marg[i][k as usize - 1].eval_f64(beta));
        }
    }
    obs.push(Observable::UniformIn {
        set: d0.to_vec(),
        color: 1,
    });
    exact.push(
        m.probability(&Event::UniformIn(d0.to_vec(), 1))
            .eval_f64(beta),
    );
    obs.push(Observable::Uniform { set: d0.to_vec() });
    exact.push(m.probability(&Event::Uniform(d0.to_vec())).eval_f64(beta));
    let es = es_joint(r, &[], DEFAULT_CAP, Execution::Parallel).unwrap();
    obs.push(Observable::Percolation { vertex: d0[0] });
    exact.push(es.probability_of(|s| s.linked(d0[0])).eval_f64(beta));
    obs.push(Observable::PercolationUniform { set: d0.to_vec() });
    exact.push(
        es.probability_of(|s| {
            d0.iter().all(|&v| s.color(v) == s.color(d0[0])) && d0.iter().any(|&v| s.linked(v))
        })
        .eval_f64(beta),
    );
    let rep = run_experiment(r, beta, &schedule(40_000, 9), &obs, Execution::Parallel).unwrap();
    for (e, want) in rep.estimates.iter().zip(&exact) {
        let tol = 3.5 * e.stderr + 2e-3;
        assert!(
            (e.mean - want).abs() <= tol,
            "beta {beta} {}: {} ± {} vs {want}",
            e.name,
            e.mean,
            e.stderr
        );
    }
}

#[test]
fn chains_agree_with_exact_enumeration() {
    let q = Arc::new(build_diced_patch(5));
    let star = Region::star(q.clone(), q.origin()).unwrap();
    let tri = region_from_axial_seed(&q, &[(0, 0), (1, 0), (0, 1)]).unwrap();
    let d0: Vec<u32> = [(0, 0), (1, 0), (0, 1)]
        .iter()
        .map(|&a| q.v0_at(a).unwrap())
        .collect();
    for beta in [
        Beta::Finite(rat(1, 2)),
        Beta::Finite(rat(2, 1)),
        Beta::Infinite,
    ] {
        check_against_exact(&star, &beta, &[q.origin()]);
        check_against_exact(&tri, &beta, &d0);
    }
}

#[test]
fn infinite_temperature_is_uniform() {
    let q = Arc::new(build_diced_patch(5));
    let r = Region::ball(q.clone(), q.origin(), 1).unwrap();
    let obs: Vec<Observable> = r
        .lambda()
        .iter()
        .map(|&v| Observable::Marginal {
            vertex: v,
            color: 3,
        })
        .collect();
    let rep = run_experiment(
        &r,
        &Beta::from_f64(0.0).unwrap(),
        &schedule(20_000, 1),
        &obs,
        Execution::Parallel,
    )
    .unwrap();
    for e in &rep.estimates {
        assert!(
            (e.mean - 1.0 / 3.0).abs() < 4.0 * e.stderr + 1e-3,
            "{} {}",
            e.name,
            e.mean
        );
    }
}

#[test]
fn runs_are_reproducible_across_execution_modes() {
    let q = Arc::new(build_diced_patch(6));
    let r = Region::ball(q.clone(), q.origin(), 2).unwrap();
    let obs = vec![
        Observable::Staggered { vertex: q.origin() },
        Observable::Percolation { vertex: q.origin() },
        Observable::ImproperDensity,
    ];
    let beta = Beta::Finite(rat(3, 2));
    let a = run_experiment(&r, &beta, &schedule(2_000, 42), &obs, Execution::Parallel).unwrap();
    let b = run_experiment(&r, &beta, &schedule(2_000, 42), &obs, Execution::Sequential).unwrap();
    let c = run_experiment(&r, &beta, &schedule(2_000, 43), &obs, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

fn fitted_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    xs.iter()
        .zip(ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
}

#[test]
fn improper_density_decays_like_exp_minus_beta() {
    let q = Arc::new(build_diced_patch(5));
    let r = region_from_axial_seed(&q, &[(0, 0), (1, 0), (0, 1)]).unwrap();
    let m = enumerate_measure(&r, DEFAULT_CAP, Execution::Parallel).unwrap();
    let z = m.partition_function();
    let mean_h = Poly::from_coeffs(
        z.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| k as i128 * c)
            .collect(),
    );
    let density = PolyRatio::new(mean_h, z.scale(r.edges().len() as i128));
    let exact_log = |b: i64| density.eval_f64(&Beta::Finite(rat(b, 1))).ln();

    let xs: Vec<f64> = (2..=5).map(|b| b as f64).collect();
    let mut ys = Vec::new();
    for b in 2..=5 {
        let rep = run_experiment(
            &r,
            &Beta::Finite(rat(b, 1)),
            &schedule(100_000, 5),
            &[Observable::ImproperDensity],
            Execution::Parallel,
        )
        .unwrap();
        ys.push(rep.estimates[0].mean.ln());
    }
    let sampled = fitted_slope(&xs, &ys);
    let exact = fitted_slope(&xs, &(2..=5).map(exact_log).collect::<Vec<_>>());
    assert!(
        (sampled - exact).abs() < 0.05,
        "sampled {sampled}, exact {exact}"
    );
    // e^{-2β} corrections steepen the fit on [2,5]; the local slope tends to -1
    assert!(exact < -1.15);
    let local = exact_log(12) - exact_log(11);
    assert!((local + 1.0).abs() < 1e-3, "{local}");
}

#[test]
fn colours_two_and_three_are_symmetric() {
    let q = Arc::new(build_diced_patch(5));
    let r = Region::ball(q.clone(), q.origin(), 1).unwrap();
    let t = q.neighbors(q.origin())[0];
    let obs: Vec<Observable> = [q.origin(), t]
        .iter()
        .flat_map(|&v| [2, 3].map(|color| Observable::Marginal { vertex: v, color }))
        .collect();
    let rep = run_experiment(
        &r,
        &Beta::Finite(rat(1, 1)),
        &schedule(40_000, 3),
        &obs,
        Execution::Parallel,
    )
    .unwrap();
    for pair in rep.estimates.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let se = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!(
            (a.mean - b.mean).abs() <= 3.0 * se + 1e-3,
            "{} {} vs {}",
            a.name,
            a.mean,
            b.mean
        );
    }
}

#[test]
fn bond_occupation_matches_p() {
    let q = Arc::new(build_diced_patch(5));
    let r = Region::ball(q.clone(), q.origin(), 1).unwrap();
    let beta = Beta::Finite(rat(1, 1));
    let mut chain = Chain::new(&r, &beta, 17, 0);
    let (mut open, mut eligible) = (0u64, 0u64);
    for _ in 0..5_000 {
        chain.local_sweep();
        chain.wsk_sweep();
        let eta = chain.sample_eta();
        for (&(u, v), &o) in r.edges().iter().zip(&eta) {
            let pair = [chain.color(u), chain.color(v)];
            if pair == [1, 2] || pair == [2, 1] {
                eligible += 1;
                open += o as u64;
            } else {
                assert!(!o);
            }
        }
    }
    let p = 1.0 - (-1.0f64).exp();
    let f = open as f64 / eligible as f64;
    let se = (p * (1.0 - p) / eligible as f64).sqrt();
    assert!((f - p).abs() <= 3.0 * se, "{f} vs {p}");
}
