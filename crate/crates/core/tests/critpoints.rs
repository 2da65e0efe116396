//! Critical points of the fixed pencil: Bézout counts, conjugation
//! symmetry, the exact resultant, and a fiber-scan oracle for real counts.

use lefschetz_core::critpoints::{
    classify_real, critical_system, fs_distance, normalize, resultant_exact, solve_critical_points, solve_via_resultant, write_csv_rows,
    ChartMap, PencilModel, CSV_HEADER,
};
use lefschetz_core::exact::f64_to_rational;
use lefschetz_core::uniroots::{sturm_count_real_roots, IntPoly, RealDomain};
use lefschetz_core::{sample_section, Degree, EnsembleSpec, Field, HomogeneousPolynomial, MultiIndex, Space};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CP2: PencilModel = PencilModel::ProjectionFromPoint;

fn kostlan(space: Space, d: u32, field: Field, trial: u64) -> HomogeneousPolynomial {
    sample_section(&EnsembleSpec::new(space, d, field, 2024), trial)
}

/// Matches two point sets up to projective equivalence.
fn same_points(space: Space, a: &[Vec<Complex64>], b: &[Vec<Complex64>], tol: f64) -> bool {
    let a: Vec<_> = a.iter().map(|v| normalize(space, v)).collect();
    let b: Vec<_> = b.iter().map(|v| normalize(space, v)).collect();
    a.len() == b.len() && a.iter().all(|u| b.iter().any(|v| fs_distance(space, u, v) < tol))
}

#[test]
fn complex_counts_follow_bezout() {
    for d in 2..=7u32 {
        for trial in 0..5 {
            let f = kostlan(Space::Cp2, d, Field::Complex, trial);
            let set = solve_critical_points(&f, CP2).unwrap();
            assert_eq!(set.len(), (d * (d - 1)) as usize, "d={d}");
            assert!(set.points.iter().all(|p| p.residual < 1e-8));
            assert!(set.min_separation >= 1e-6);
        }
    }
}

#[test]
fn bidegree_counts_on_the_quadric() {
    for d in 1..=5u32 {
        let f = kostlan(Space::Cp1xCp1, d, Field::Complex, 3);
        let set = solve_critical_points(&f, PencilModel::FirstFactor).unwrap();
        assert_eq!(set.len(), (2 * d * (d - 1)) as usize, "d={d}");
    }
}

#[test]
fn fermat_is_degenerate() {
    // x = 0 and y^d + z^d = 0: d points, each of multiplicity d - 1.
    for d in [3u32, 4] {
        let f = HomogeneousPolynomial::from_real_terms(
            Space::Cp2,
            Degree::Total(d),
            &[(&[d, 0, 0], 1.0), (&[0, d, 0], 1.0), (&[0, 0, d], 1.0)],
        )
        .unwrap();
        let (_, fx) = critical_system(&f, CP2).unwrap();
        assert_eq!(fx.num_terms(), 1);
        assert_eq!(fx.coeff(&MultiIndex::new(vec![d - 1, 0, 0])), Complex64::new(d as f64, 0.0));
        let err = solve_critical_points(&f, CP2).unwrap_err();
        assert!(err.is_degenerate(), "{err}");
    }
}

#[test]
fn scaling_the_section_keeps_the_points() {
    let f = kostlan(Space::Cp2, 5, Field::Complex, 9);
    let g = f.scale(Complex64::new(-3.5e4, 2.0e3));
    let a = solve_critical_points(&f, CP2).unwrap();
    let b = solve_critical_points(&g, CP2).unwrap();
    let pa: Vec<_> = a.points.iter().map(|p| p.coords.clone()).collect();
    let pb: Vec<_> = b.points.iter().map(|p| p.coords.clone()).collect();
    assert!(same_points(Space::Cp2, &pa, &pb, 1e-9));
}

#[test]
fn discriminant_and_resultant_routes_agree() {
    for d in [3u32, 4, 5] {
        let f = kostlan(Space::Cp2, d, Field::Complex, 11);
        let set = solve_critical_points(&f, CP2).unwrap();
        let map = ChartMap::new(CP2);
        let via: Vec<Vec<Complex64>> = solve_via_resultant(&f, CP2)
            .unwrap()
            .into_iter()
            .map(|s| map.point_in(s.chart, s.s, s.t))
            .collect();
        let direct: Vec<_> = set.points.iter().map(|p| p.coords.clone()).collect();
        assert!(same_points(Space::Cp2, &direct, &via, 1e-7), "d={d}");
    }
}

#[test]
fn exact_resultant_has_full_degree() {
    for d in 2..=8u32 {
        let f = kostlan(Space::Cp2, d, Field::Real, 5);
        let r = resultant_exact(&f.to_exact()).unwrap();
        assert_eq!(r.len() - 1, (d * (d - 1)) as usize, "d={d}");
    }
}

#[test]
fn real_sections_give_conjugation_invariant_sets() {
    for (space, pencil) in [(Space::Cp2, CP2), (Space::Cp1xCp1, PencilModel::FirstFactor)] {
        for d in [3u32, 5, 8] {
            for trial in 0..4 {
                let f = kostlan(space, d, Field::Real, trial);
                let set = classify_real(&solve_critical_points(&f, pencil).unwrap(), &f).unwrap();
                assert!(!set.ambiguous, "{space} d={d}: {:?}", set.notes);
                assert_eq!((set.len() - set.real_count()) % 2, 0);
                let pts: Vec<_> = set.points.iter().map(|p| p.coords.clone()).collect();
                let conj: Vec<Vec<Complex64>> =
                    pts.iter().map(|v| v.iter().map(|z| z.conj()).collect()).collect();
                assert!(same_points(space, &pts, &conj, 1e-8));
                for p in &set.points {
                    assert_eq!(p.is_real, p.dist_to_conjugate < 1e-7);
                }
            }
        }
    }
}

/// Number of real points on the fiber `[y : z] = [sin th : cos th]`,
/// i.e. real roots of `x -> f(x, sin th, cos th)`, by exact Sturm counts.
fn fiber_real_count(f: &HomogeneousPolynomial, th: f64) -> usize {
    let d = f.d() as usize;
    let (y, z) = (th.sin(), th.cos());
    let mut c = vec![0.0; d + 1];
    for (alpha, coeff) in f.terms() {
        let e = alpha.exponents();
        c[e[0] as usize] += coeff.re * y.powi(e[1] as i32) * z.powi(e[2] as i32);
    }
    let r: Vec<_> = c.iter().map(|&x| f64_to_rational(x)).collect();
    sturm_count_real_roots(&IntPoly::from_rationals(&r).unwrap(), &RealDomain::Line)
}

/// Real critical values are where the fiber count jumps by two; over the
/// whole circle of real fibers the number of jumps equals the number of
/// real critical points (when the grid separates the critical values).
fn fiber_scan_oracle(f: &HomogeneousPolynomial, samples: usize) -> usize {
    let counts: Vec<usize> = (0..samples)
        .map(|k| fiber_real_count(f, std::f64::consts::PI * (k as f64 + 0.5) / samples as f64))
        .collect();
    (0..samples)
        .map(|k| {
            let (a, b) = (counts[k], counts[(k + 1) % samples]);
            a.abs_diff(b) / 2
        })
        .sum()
}

#[test]
fn perturbed_line_arrangements_match_the_fiber_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for d in [3u32, 4, 5] {
        for _ in 0..3 {
            let mut f = HomogeneousPolynomial::from_real_terms(Space::Cp2, Degree::Total(0), &[(&[0, 0, 0], 1.0)])
                .unwrap();
            for _ in 0..d {
                let (a, b, c): (f64, f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let line = HomogeneousPolynomial::from_real_terms(
                    Space::Cp2,
                    Degree::Total(1),
                    &[(&[1, 0, 0], a), (&[0, 1, 0], b), (&[0, 0, 1], c)],
                )
                .unwrap();
                f = f.mul(&line).unwrap();
            }
            let noise = kostlan(Space::Cp2, d, Field::Real, rng.random_range(0..1000));
            let f = f.add(&noise.scale(Complex64::new(0.05, 0.0))).unwrap();
            let set = classify_real(&solve_critical_points(&f, CP2).unwrap(), &f).unwrap();
            assert!(!set.ambiguous, "{:?}", set.notes);
            assert_eq!(set.real_count(), fiber_scan_oracle(&f, 2000), "d={d}");
        }
    }
}

#[test]
fn csv_rows_have_one_line_per_point() {
    let f = kostlan(Space::Cp2, 3, Field::Real, 1);
    let set = classify_real(&solve_critical_points(&f, CP2).unwrap(), &f).unwrap();
    let mut out = Vec::new();
    write_csv_rows(&mut out, 17, &set).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), 6);
    for line in text.lines() {
        assert_eq!(line.split(',').count(), CSV_HEADER.split(',').count());
        assert!(line.starts_with("17,"));
    }
}
