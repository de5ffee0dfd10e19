use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use kt_bench::{artinian, polys, ring};
use kt_core::groebner::syzygies;
use kt_core::koszul::koszul;
use kt_core::localcoh::{compare_pipelines, Caps, Window};
use kt_core::resolution::free_resolution;
use kt_core::sr::{strong_reducer, SrCaps, SupportedComplexInput};
use kt_core::tate::{tate, tate_to_koszul_lift};
use kt_core::{GradedMatrix, PresentedModule};

fn koszul_homology(c: &mut Criterion) {
    let r = ring(2, &["x", "y", "z", "w"]);
    let k = koszul(&r, &polys(&r, &["x", "y", "z", "w"])).unwrap().complex;
    c.bench_function("koszul_homology_4_vars", |b| {
        b.iter(|| (1..=4).all(|n| black_box(&k).homology_vanishes(&r, n)))
    });
}

fn syzygy_modules(c: &mut Criterion) {
    let r = ring(3, &["x", "y", "z"]);
    let mut group = c.benchmark_group("syzygies");
    for d in [2u32, 3, 4] {
        let m = artinian(&r, d, d, d);
        group.bench_with_input(BenchmarkId::from_parameter(d), m.relations(), |b, rel| b.iter(|| syzygies(&r, black_box(rel))));
    }
    group.finish();
}

fn resolutions(c: &mut Criterion) {
    let r = ring(2, &["x", "y", "z"]);
    let m = artinian(&r, 3, 3, 3);
    c.bench_function("free_resolution_artinian", |b| b.iter(|| free_resolution(&r, black_box(&m), 4)));
}

fn tate_and_lifts(c: &mut Criterion) {
    let r = ring(2, &["x", "y"]);
    let seq = polys(&r, &["x", "x*y"]);
    c.bench_function("tate_x_xy", |b| b.iter(|| tate(&r, black_box(&seq), 6).unwrap()));
    c.bench_function("lift_x_xy_r2", |b| b.iter(|| tate_to_koszul_lift(&r, black_box(&seq), 2, 2, 32).unwrap()));
}

fn local_cohomology(c: &mut Criterion) {
    let r = ring(2, &["x", "y"]);
    let seq = polys(&r, &["x", "y"]);
    let s = PresentedModule::quotient_ring(&r, &[]).unwrap();
    let w = Window::new(0, 2, -5, 0);
    let mut group = c.benchmark_group("local_cohomology");
    group.sample_size(10);
    group.bench_function("both_pipelines_xy", |b| b.iter(|| compare_pipelines(&r, &seq, &s, &w, &Caps::default()).unwrap()));
    group.finish();
}

fn reducer(c: &mut Criterion) {
    let r = ring(2, &["x", "y"]);
    let seq = polys(&r, &["x", "y"]);
    let k = koszul(&r, &seq).unwrap().complex;
    let input = SupportedComplexInput {
        complex: k.clone(),
        support: seq.clone(),
        target: PresentedModule::quotient_ring(&r, &seq).unwrap(),
        map: GradedMatrix::identity(&r, k.module(0)),
    };
    let mut group = c.benchmark_group("strong_reducer");
    group.sample_size(10);
    group.bench_function("koszul_xy", |b| b.iter(|| strong_reducer(&r, black_box(&input), &SrCaps::default()).unwrap()));
    group.finish();
}

criterion_group!(benches, koszul_homology, syzygy_modules, resolutions, tate_and_lifts, local_cohomology, reducer);
criterion_main!(benches);
