use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lefschetz_bench::{complex_univariate, real_univariate, section};
use lefschetz_core::critpoints::{classify_real, solve_critical_points, PencilModel};
use lefschetz_core::pmcheck::{pm_weighted_count, Bump, QuadratureGrid};
use lefschetz_core::topology::real_locus_components;
use lefschetz_core::uniroots::{complex_roots, real_root_count, sturm_count_real_roots, IntPoly, RealDomain};
use lefschetz_core::{Field, Space};
use num_complex::Complex64;

fn univariate(c: &mut Criterion) {
    let mut g = c.benchmark_group("univariate");
    for d in [25u32, 100] {
        let coeffs = real_univariate(d);
        g.bench_with_input(BenchmarkId::new("real_root_count", d), &coeffs, |b, c| {
            b.iter(|| real_root_count(black_box(c)).unwrap())
        });
        let exact = IntPoly::from_f64(&coeffs).unwrap();
        g.bench_with_input(BenchmarkId::new("sturm", d), &exact, |b, p| {
            b.iter(|| sturm_count_real_roots(black_box(p), &RealDomain::Projective))
        });
        let p = complex_univariate(d);
        g.bench_with_input(BenchmarkId::new("complex_roots", d), &p, |b, p| {
            b.iter(|| complex_roots(black_box(p)).unwrap())
        });
    }
    g.finish();
}

fn critical_points(c: &mut Criterion) {
    let mut g = c.benchmark_group("critical_points");
    g.sample_size(10);
    for d in [4u32, 8, 12, 16] {
        let f = section(Space::Cp2, d, Field::Complex);
        g.bench_with_input(BenchmarkId::new("solve", d), &f, |b, f| {
            b.iter(|| solve_critical_points(black_box(f), PencilModel::ProjectionFromPoint).unwrap())
        });
        let real = section(Space::Cp2, d, Field::Real);
        let set = solve_critical_points(&real, PencilModel::ProjectionFromPoint).unwrap();
        g.bench_with_input(BenchmarkId::new("classify_real", d), &(real, set), |b, (f, s)| {
            b.iter(|| classify_real(black_box(s), f).unwrap())
        });
    }
    g.finish();
}

fn topology(c: &mut Criterion) {
    let mut g = c.benchmark_group("topology");
    g.sample_size(10);
    for d in [4u32, 8, 12] {
        let f = section(Space::Cp2, d, Field::Real);
        g.bench_with_input(BenchmarkId::new("components", d), &f, |b, f| {
            b.iter(|| real_locus_components(black_box(f), 14).unwrap())
        });
    }
    g.finish();
}

fn log_potential(c: &mut Criterion) {
    let mut g = c.benchmark_group("log_potential");
    g.sample_size(10);
    let f = complex_univariate(8);
    let chi = Bump::smooth(Complex64::new(0.1, -0.2), 0.9).unwrap();
    for res in [256usize, 1024] {
        let grid = QuadratureGrid::around(&chi, res).unwrap();
        g.bench_with_input(BenchmarkId::new("quadrature", res), &grid, |b, grid| {
            b.iter(|| pm_weighted_count(black_box(&f), &chi, grid).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, univariate, critical_points, topology, log_potential);
criterion_main!(benches);
