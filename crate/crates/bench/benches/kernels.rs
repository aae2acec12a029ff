use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use cosserat_core::bounds::{cuboid_upper, SERIES_TOL};
use cosserat_core::cone3d::{critical_line_roots, ConeSpec, CriticalLineOptions};
use cosserat_core::fem::{
    assemble, build_mesh, cosserat_eigs, domain_extents, EigOptions, FeSpacePair, MeshSpec,
};
use cosserat_core::mellin2d::{imaginary_roots, min_positive_real_root, CornerSpec2D};
use cosserat_core::special::legendre_pair;

fn corner(c: &mut Criterion) {
    let sq = CornerSpec2D::new(PI / 2.0).unwrap();
    c.bench_function("imaginary_roots", |b| {
        b.iter(|| imaginary_roots(black_box(0.3), sq, 20.0))
    });
    c.bench_function("min_positive_real_root", |b| {
        b.iter(|| min_positive_real_root(black_box(0.0313756), sq))
    });
}

fn cone(c: &mut Criterion) {
    c.bench_function("legendre_pair", |b| {
        b.iter(|| legendre_pair(black_box(Complex64::new(-0.5, 3.0)), 1, black_box(-0.3)))
    });
    let cone = ConeSpec::from_degrees(150.0).unwrap();
    let opts = CriticalLineOptions::default();
    c.bench_function("critical_line_roots", |b| {
        b.iter(|| critical_line_roots(black_box(0.7), cone, 0, &opts))
    });
}

fn fem(c: &mut Criterion) {
    let extents = domain_extents(2, 0.2).unwrap();
    let mesh = build_mesh(&extents, &MeshSpec::level(3)).unwrap();
    c.bench_function("assemble_q2q1_level3", |b| {
        b.iter(|| assemble(&mesh, FeSpacePair::q2q1()))
    });
    let ops = assemble(&mesh, FeSpacePair::q2q1()).unwrap();
    let mut g = c.benchmark_group("eigs");
    g.sample_size(10);
    g.bench_function("cosserat_eigs_level3", |b| {
        b.iter(|| cosserat_eigs(&ops, &EigOptions::with_k(2)))
    });
    g.finish();
}

fn bounds(c: &mut Criterion) {
    c.bench_function("cuboid_upper", |b| {
        b.iter(|| cuboid_upper(black_box(0.2), SERIES_TOL))
    });
}

criterion_group!(benches, corner, cone, fem, bounds);
criterion_main!(benches);
