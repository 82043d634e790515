use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sindy_core::numkernel::DenseMatrix;
use sindy_core::pipeline::{identify_with, sweep_seeds, Benchmark, IdentifyConfig};
use sindy_core::sindy::{brute_force_global_min_with, normalize_system};
use sindy_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force");
    group.sample_size(10);
    for n in [12, 14, 16] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let a = DenseMatrix::from_fn(2 * n, n, |_, _| rng.random_range(-1.0..1.0));
        let b: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (a, b, _) = normalize_system(&a, &b);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |bench, _| {
                bench.iter(|| brute_force_global_min_with(black_box(&a), black_box(&b), 0.1, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn seed_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("seed_sweep");
    group.sample_size(10);
    let seeds: Vec<u64> = (0..16).collect();
    for bench_system in [Benchmark::Lorenz, Benchmark::Thomas] {
        let config = IdentifyConfig::preset(bench_system);
        for (name, exec) in MODES {
            group.bench_function(BenchmarkId::new(name, format!("{bench_system:?}")), |bench| {
                bench.iter(|| sweep_seeds(black_box(&config), &seeds, exec))
            });
        }
    }
    group.finish();
}

fn per_equation(c: &mut Criterion) {
    let mut group = c.benchmark_group("identify");
    group.sample_size(20);
    let config = IdentifyConfig::preset(Benchmark::Lorenz);
    for (name, exec) in MODES {
        group.bench_function(name, |bench| bench.iter(|| identify_with(black_box(&config), exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, brute_force, seed_sweep, per_equation);
criterion_main!(benches);
