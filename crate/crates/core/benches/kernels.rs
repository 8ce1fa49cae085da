//! Sequential vs rayon execution of the data-parallel kernels.
//!
//! Without the `parallel` feature only the sequential variants are measured.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use newman_core::compiler::{empirical_frequency_with, newman_transform_with};
use newman_core::geometry::eval_combination_with;
use newman_core::protocol::mixture_table_with;
use newman_core::{build_equality, ConvexCombination, Exec, NewmanOptions, PointSet};

fn strategies() -> Vec<(&'static str, Exec)> {
    #[allow(unused_mut)]
    let mut s = vec![("sequential", Exec::Sequential)];
    #[cfg(feature = "parallel")]
    s.push(("parallel", Exec::Parallel));
    s
}

fn eval(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rows = (0..256)
        .map(|_| {
            (0..4096)
                .map(|_| if rng.gen() { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    let points = PointSet::from_rows(rows).unwrap();
    let raw: Vec<f64> = (0..256).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let comb =
        ConvexCombination::from_dense(&raw.iter().map(|w| w / total).collect::<Vec<_>>()).unwrap();

    let mut group = c.benchmark_group("eval_combination_d4096_m256");
    for (name, exec) in strategies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| eval_combination_with(&points, &comb, exec).unwrap())
        });
    }
    group.finish();
}

fn mixture(c: &mut Criterion) {
    let (_, public) = build_equality(5, 2).unwrap();
    let mut group = c.benchmark_group("mixture_table_equality_n5_t2");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| mixture_table_with(&public, exec).unwrap())
        });
    }
    group.finish();
}

fn compile(c: &mut Criterion) {
    let (f, public) = build_equality(4, 2).unwrap();
    let options = NewmanOptions::new(0.1, 0);
    let mut group = c.benchmark_group("newman_transform_equality_n4_t2");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| newman_transform_with(&f, &public, &options, exec).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let (f, public) = build_equality(4, 2).unwrap();
    let (private, _) =
        newman_transform_with(&f, &public, &NewmanOptions::new(0.1, 0), Exec::default()).unwrap();
    let mut group = c.benchmark_group("empirical_frequency_1e5");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| empirical_frequency_with(&private, 3, 5, 100_000, 0, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, eval, mixture, compile, monte_carlo);
criterion_main!(benches);
