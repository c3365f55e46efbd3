use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use moishezon_core::branch::{find_admissible_g, infinity_chart, is_admissible};
use moishezon_core::lattice::{
    build_minitwistor_T, build_surface_S, validate_T, validate_configuration,
};
use moishezon_core::linsys::{elimination_ledger, verify_Y_classes};
use moishezon_core::models::{degree_by_slicing, derive_branch};
use moishezon_core::poly::int;
use moishezon_core::ModelParams;

fn lattices(c: &mut Criterion) {
    c.bench_function("surface_S n=10 build+validate", |b| {
        b.iter(|| validate_configuration(&build_surface_S(black_box(10)).unwrap()))
    });
    c.bench_function("surface_T n=10 build+validate", |b| {
        b.iter(|| validate_T(&build_minitwistor_T(black_box(10)).unwrap()))
    });
}

fn linear_systems(c: &mut Criterion) {
    c.bench_function("verify_Y_classes n=10", |b| {
        b.iter(|| verify_Y_classes(black_box(10)))
    });
    c.bench_function("elimination_ledger n=10", |b| {
        b.iter(|| elimination_ledger(black_box(10)).unwrap())
    });
}

fn models(c: &mut Criterion) {
    let p5 = ModelParams::seeded(5, 1).unwrap();
    c.bench_function("derive_branch n=5", |b| {
        b.iter(|| derive_branch(black_box(&p5)))
    });
    let p3 = ModelParams::seeded(3, 1).unwrap();
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("degree_by_slicing n=3", |b| {
        b.iter(|| degree_by_slicing(black_box(&p3), 0).unwrap())
    });
    g.finish();
}

fn branch(c: &mut Criterion) {
    let p8 = ModelParams::seeded(8, 1).unwrap();
    c.bench_function("is_admissible n=8", |b| {
        b.iter(|| is_admissible(black_box(&p8)).unwrap())
    });
    c.bench_function("infinity_chart n=8", |b| {
        b.iter(|| infinity_chart(black_box(&p8)))
    });
    let lambdas = vec![int(1), int(2)];
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    g.bench_function("find_admissible_g n=3 seed 0", |b| {
        b.iter(|| find_admissible_g(3, black_box(&lambdas), 0, 1e-9).unwrap())
    });
    g.finish();
}

criterion_group!(benches, lattices, linear_systems, models, branch);
criterion_main!(benches);
