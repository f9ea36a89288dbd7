//! Benchmarks for the numerical kernels and the Monte Carlo hot path.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use tincell_core::model::{NetworkParams, SchedulingPolicy, TinParams};
use tincell_core::{analytics, asymptotics, numerics, sim, QuadratureConfig};

fn paper_net(lambda_b: f64) -> NetworkParams {
    NetworkParams::from_dbm(lambda_b, 46.0, -110.0, 4.0).unwrap()
}

fn bench_analytics(c: &mut Criterion) {
    let net = paper_net(5.0);
    let tin = TinParams::new(1.0, 1.8).unwrap();
    let cfg = QuadratureConfig::default();

    c.bench_function("prob_tin quadrature", |b| {
        b.iter(|| analytics::prob_tin(black_box(&net), black_box(&tin), &cfg).unwrap())
    });

    c.bench_function("coverage_effective theorem path", |b| {
        b.iter(|| analytics::coverage_effective(black_box(10.0), &net, &tin, &cfg).unwrap())
    });

    c.bench_function("coverage_classical", |b| {
        b.iter(|| analytics::coverage_classical(black_box(10.0), &net, &cfg).unwrap())
    });

    c.bench_function("rate_classical nested quadrature", |b| {
        b.iter(|| analytics::rate_classical(black_box(&net), &cfg).unwrap())
    });

    c.bench_function("tail integral alpha=3.5", |b| {
        b.iter(|| numerics::interference_tail_integral(black_box(0.7), 3.5).unwrap())
    });

    c.bench_function("solve_optimal_mu", |b| {
        b.iter(|| asymptotics::solve_optimal_mu(black_box(10.0), &net).unwrap())
    });
}

fn bench_simulator(c: &mut Criterion) {
    let net = paper_net(5.0);
    let tin = TinParams::new(1.0, 1.8).unwrap();

    let mut group = c.benchmark_group("simulator");
    group.sample_size(10);

    let classical = sim::SimulationConfig::new(&net, 10.0, 200, 1, SchedulingPolicy::Classical)
        .unwrap()
        .with_typical_cell(sim::TypicalCellMode::Crofton);
    group.bench_function("classical coverage, 200 trials", |b| {
        b.iter(|| sim::estimate_coverage(black_box(&classical), &net, &tin, 10.0).unwrap())
    });

    let exact =
        sim::SimulationConfig::new(&net, 10.0, 50, 1, SchedulingPolicy::TinExact).unwrap();
    group.bench_function("tin-exact coverage, 50 trials", |b| {
        b.iter(|| sim::estimate_coverage(black_box(&exact), &net, &tin, 10.0).unwrap())
    });

    group.finish();
}

criterion_group!(benches, bench_analytics, bench_simulator);
criterion_main!(benches);
