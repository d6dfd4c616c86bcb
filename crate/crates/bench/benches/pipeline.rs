use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use homcx::generators::{boundary_simplex, complete, cycle};
use homcx::hom::{enumerate_homs, hom_poset};
use homcx::universality::Construction;
use homcx::{betti_z2, build_g_kx, hom_complex_exponential, verify_universality, Limits, Route};
use homcx_bench::suite;

fn construction(c: &mut Criterion) {
    let lim = Limits::default();
    let mut group = c.benchmark_group("build_g_kx");
    for (name, x) in suite() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &x, |b, x| {
            b.iter(|| build_g_kx(black_box(x), 2, &lim).unwrap())
        });
    }
    group.finish();
}

fn hom_enumeration(c: &mut Criterion) {
    let lim = Limits::default();
    let g = build_g_kx(&boundary_simplex(3), 2, &lim).unwrap();
    c.bench_function("enumerate_homs K2 -> G_2,sphere", |b| {
        b.iter(|| enumerate_homs(&complete(2), black_box(&g), &lim).unwrap())
    });
    let c12 = cycle(12).reflexive();
    c.bench_function("hom_poset K2 -> C12", |b| {
        b.iter(|| hom_poset(&complete(2), black_box(&c12), &lim).unwrap())
    });
}

fn homology(c: &mut Criterion) {
    let lim = Limits::default();
    let g = build_g_kx(&boundary_simplex(3), 2, &lim).unwrap();
    let delta = hom_complex_exponential(&complete(2), &g, &lim).unwrap();
    let mut group = c.benchmark_group("homology");
    group.sample_size(10);
    group.bench_function("clique complex of G_2,sphere^K2", |b| {
        b.iter(|| hom_complex_exponential(&complete(2), black_box(&g), &lim).unwrap())
    });
    group.bench_function("betti of G_2,sphere^K2", |b| {
        b.iter(|| betti_z2(black_box(&delta)))
    });
    group.finish();
}

fn cover_checks(c: &mut Criterion) {
    let lim = Limits::default();
    let cons = Construction::new(&boundary_simplex(3), 2, &lim).unwrap();
    c.bench_function("balls and intersections, sphere", |b| {
        b.iter(|| {
            black_box(cons.balls_dismantlable());
            black_box(cons.intersections())
        })
    });
    c.bench_function("verify K2, circle", |b| {
        b.iter(|| {
            verify_universality(
                &complete(2),
                &boundary_simplex(2),
                None,
                Route::Exponential,
                &lim,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    construction,
    hom_enumeration,
    homology,
    cover_checks
);
criterion_main!(benches);
