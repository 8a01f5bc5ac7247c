//! Parallel-vs-sequential scheduling benchmarks for the data-parallel inner
//! loops: per-time-point eigen scans and per-value sweeps. A single
//! propagation is inherently sequential and serves as the baseline.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use stirap::diagnostics::eigen_spectrum_with;
use stirap::propagator::{propagate, StateVector, TimeGrid};
use stirap::scenario::find_scenario;
use stirap::sweep::{run_sweep, SweepSpec};
use stirap::Execution;

fn bench_eigen_spectrum(c: &mut Criterion) {
    let s = find_scenario("fig4").unwrap();
    let cfg = s.config.system;
    let grid = TimeGrid::new(-4.0, 4.0, 2e-3).unwrap();

    let mut group = c.benchmark_group("eigen_spectrum_4001pts");
    for (label, exec) in [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::Parallel),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &exec, |b, &exec| {
            b.iter(|| {
                let series = eigen_spectrum_with(black_box(&cfg), &grid, exec).unwrap();
                black_box(series.eigenvalues.len())
            });
        });
    }
    group.finish();
}

fn bench_sweep(c: &mut Criterion) {
    let mut base = find_scenario("fig2a").unwrap().config;
    base.grid.dt = 0.02;
    let spec = SweepSpec::parse("delta_2=1.0:6.0:8").unwrap();

    let mut group = c.benchmark_group("sweep_8pts");
    group.sample_size(10);
    for (label, exec) in [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::Parallel),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &exec, |b, &exec| {
            b.iter(|| {
                let points = run_sweep(black_box(&base), &spec, exec).unwrap();
                black_box(points.len())
            });
        });
    }
    group.finish();
}

fn bench_single_propagation(c: &mut Criterion) {
    let mut cfg = find_scenario("fig2a").unwrap().config;
    cfg.grid.dt = 0.01;
    c.bench_function("propagate_fig2a_5k_steps", |b| {
        b.iter(|| {
            let traj = propagate(
                black_box(&cfg.system),
                &cfg.grid,
                &StateVector::ground(cfg.system.n_levels),
            )
            .unwrap();
            black_box(traj.states.len())
        });
    });
}

criterion_group!(benches, bench_eigen_spectrum, bench_sweep, bench_single_propagation);
criterion_main!(benches);
