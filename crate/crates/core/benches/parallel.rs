use std::hint::black_box;
use std::sync::Arc;

use afpotts::gibbs::{enumerate_measure, region_from_axial_seed, DEFAULT_CAP};
use afpotts::lattice::{build_diced_patch, Region};
use afpotts::montecarlo::{run_experiment, Observable, Schedule};
use afpotts::par::Execution;
use afpotts::sap::{enumerate_polygons, DEFAULT_GUARD};
use afpotts::Beta;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn polygons(c: &mut Criterion) {
    let mut g = c.benchmark_group("polygon_enumeration_l18");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(enumerate_polygons(18, DEFAULT_GUARD, exec).unwrap()))
        });
    }
    g.finish();
}

fn exact(c: &mut Criterion) {
    let q = Arc::new(build_diced_patch(5));
    let r = region_from_axial_seed(&q, &[(0, 0), (1, 0)]).unwrap();
    let mut g = c.benchmark_group("exact_measure_double_hexagon");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                black_box(
                    enumerate_measure(&r, DEFAULT_CAP, exec)
                        .unwrap()
                        .partition_function()
                        .clone(),
                )
            })
        });
    }
    g.finish();
}

fn chains(c: &mut Criterion) {
    let q = Arc::new(build_diced_patch(9));
    let r = Region::ball(q.clone(), q.origin(), 6).unwrap();
    let obs = [
        Observable::Staggered { vertex: q.origin() },
        Observable::Percolation { vertex: q.origin() },
    ];
    let schedule = Schedule {
        sweeps: 500,
        thermalization: 50,
        metropolis_per_wsk: 1,
        local_only: false,
        chains: 8,
        seed: 1,
    };
    let beta: Beta = "3".parse().unwrap();
    let mut g = c.benchmark_group("monte_carlo_8_chains");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(run_experiment(&r, &beta, &schedule, &obs, exec).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, polygons, exact, chains);
criterion_main!(benches);
