use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use charlier_core::charlier::{charlier_abs_moment, charlier_row, remainder_constant};
use charlier_core::expansion::{charlier_coefficients, parseval_triple, ExpansionVariant};
use charlier_core::measures::{signed_measure_pmf, Approximant};
use charlier_core::metrics::{distance, DistanceKind};
use charlier_core::params::BernoulliParams;
use charlier_core::pmf::{poisson_binomial_pmf, poisson_pmf, tail_split};
use charlier_core::verify::inequality_battery;

fn bench_pmfs(c: &mut Criterion) {
    let params = BernoulliParams::uniform(1000, 0.3).unwrap();
    c.bench_function("poisson_binomial_pmf_n1000", |b| {
        b.iter(|| poisson_binomial_pmf(black_box(&params)).unwrap())
    });
    c.bench_function("poisson_pmf_lambda300", |b| {
        b.iter(|| poisson_pmf(black_box(300.0), None).unwrap())
    });
    c.bench_function("tail_split_lambda300_m330", |b| {
        b.iter(|| tail_split(black_box(300.0), black_box(330)).unwrap())
    });
}

fn bench_distances(c: &mut Criterion) {
    let params = BernoulliParams::uniform(1000, 0.3).unwrap();
    let pb = poisson_binomial_pmf(&params).unwrap();
    let pois = poisson_pmf(params.lambda(), Some((0, pb.support().1))).unwrap();
    c.bench_function("tv_distance_n1000", |b| {
        b.iter(|| distance(DistanceKind::Tv, black_box(&pb), black_box(&pois), None).unwrap())
    });
    c.bench_function("chi2_distance_n1000", |b| {
        b.iter(|| distance(DistanceKind::Chi2, black_box(&pb), black_box(&pois), None).unwrap())
    });
}

fn bench_charlier(c: &mut Criterion) {
    c.bench_function("charlier_row_k24", |b| {
        b.iter(|| charlier_row(black_box(24), black_box(10.0), black_box(50)).unwrap())
    });
    c.bench_function("abs_moment_k2_lambda200", |b| {
        b.iter(|| charlier_abs_moment(black_box(2), black_box(200.0)).unwrap())
    });
    c.bench_function("remainder_constant_m3", |b| {
        b.iter(|| remainder_constant(black_box(3)))
    });
}

fn bench_expansion(c: &mut Criterion) {
    let params = BernoulliParams::uniform(50, 0.1).unwrap();
    c.bench_function("charlier_coefficients_order30", |b| {
        b.iter(|| {
            charlier_coefficients(black_box(&params), ExpansionVariant::MinusPoisson, 30).unwrap()
        })
    });
    let small = BernoulliParams::uniform(20, 0.05).unwrap();
    c.bench_function("parseval_triple_n20", |b| {
        b.iter(|| parseval_triple(black_box(&small), ExpansionVariant::MinusPoisson).unwrap())
    });
}

fn bench_measures(c: &mut Criterion) {
    let params = BernoulliParams::uniform(250, 0.2).unwrap();
    c.bench_function("p2_pmf_lambda50", |b| {
        b.iter(|| signed_measure_pmf(black_box(&params), Approximant::P2, None).unwrap())
    });
}

fn bench_battery(c: &mut Criterion) {
    c.bench_function("inequality_battery_2000", |b| {
        b.iter(|| inequality_battery(black_box(42), black_box(2000)))
    });
}

criterion_group!(
    benches,
    bench_pmfs,
    bench_distances,
    bench_charlier,
    bench_expansion,
    bench_measures,
    bench_battery
);
criterion_main!(benches);
