//! Sequential versus data-parallel execution of the three hot paths.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fisherzeros::sim::{run_statevector_with, run_with_noise_with};
use fisherzeros::zeros::{default_grid, sweep_with, SweepMode};
use fisherzeros::{build_protocol_circuit, Execution, NoiseConfig, Preset, SpinSystem};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn chain(n: usize) -> SpinSystem {
    SpinSystem::new(n, (0..n - 1).map(|k| (k, k + 1, 1.0)), 0.5).unwrap()
}

fn exact_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact_sweep_81pt");
    let grid = default_grid();
    for n in [7, 14] {
        let s = chain(n);
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &s, |b, s| {
                b.iter(|| sweep_with(s, 1.0, black_box(&grid), SweepMode::Exact, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn statevector(c: &mut Criterion) {
    let mut g = c.benchmark_group("statevector");
    g.sample_size(10);
    for n in [16, 20] {
        let circuit = build_protocol_circuit(&chain(n), 1.3);
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &circuit, |b, c| {
                b.iter(|| run_statevector_with(black_box(c), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn noisy_trajectories(c: &mut Criterion) {
    let mut g = c.benchmark_group("noisy_lagos7_8192_shots");
    g.sample_size(10);
    let circuit = build_protocol_circuit(&SpinSystem::preset(Preset::Lagos7, 1.0, 0.0).unwrap(), 1.7);
    let noise = NoiseConfig::default();
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| run_with_noise_with(black_box(&circuit), &noise, 8192, 1, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, exact_sweep, statevector, noisy_trajectories);
criterion_main!(benches);
