use std::hint::black_box;

use cantor_core::correlation::{cantor_phases, pair_correlation};
use cantor_core::expsum::weyl_sum;
use cantor_core::intersective::{max_avoiding_set, vdc_polynomial, DifferenceFamily, SolverMode};
use cantor_core::{CantorSet, Frequency};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn enumeration(c: &mut Criterion) {
    let set = CantorSet::new(7, [0, 1, 3]).unwrap();
    c.bench_function("element 10^4 indices", |b| {
        b.iter(|| (0..10_000u64).map(|n| set.element(black_box(n))).max())
    });
}

fn weyl(c: &mut Criterion) {
    let set = CantorSet::new(3, [0, 2]).unwrap();
    let alpha = Frequency::real(std::f64::consts::SQRT_2 - 1.0);
    let beta = Frequency::rational(1, 3);
    let mut group = c.benchmark_group("weyl sum");
    for n in [1u64 << 12, 1 << 16] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| weyl_sum(&set, &alpha, &beta, black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn avoiding(c: &mut Criterion) {
    let set = CantorSet::new(5, [0, 2, 3]).unwrap();
    let family = DifferenceFamily::from_cantor(&set, 25);
    c.bench_function("exact avoiding set N = 25", |b| {
        b.iter(|| max_avoiding_set(&family, black_box(25), SolverMode::Exact).unwrap())
    });
}

fn cosine(c: &mut Criterion) {
    c.bench_function("kernel polynomial b = 9, J = 3", |b| {
        b.iter(|| vdc_polynomial(9, black_box(&[-1, 0, 1]), 3).unwrap())
    });
}

fn correlation(c: &mut Criterion) {
    let set = CantorSet::new(7, [0, 1, 3]).unwrap();
    let thetas = cantor_phases(&set, &Frequency::real(0.3048969612216306), 4096);
    c.bench_function("pair correlation N = 4096", |b| {
        b.iter(|| pair_correlation(black_box(&thetas), 0.5).unwrap())
    });
}

criterion_group!(benches, enumeration, weyl, avoiding, cosine, correlation);
criterion_main!(benches);
