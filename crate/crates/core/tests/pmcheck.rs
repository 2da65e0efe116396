//! Log-potential quadrature against direct root sums on the `CP1` chart.

use lefschetz_core::pmcheck::{pm_convergence_study, pm_weighted_count, Bump, BumpSum, PlanarTest, QuadratureGrid};
use lefschetz_core::uniroots::complex_roots;
use lefschetz_core::{sample_section, AffinePolynomial, EnsembleSpec, Field, Space};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kostlan(d: u32, trial: u64) -> AffinePolynomial {
    sample_section(&EnsembleSpec::new(Space::Cp1, d, Field::Complex, 31), trial)
        .dehomogenize(0)
        .unwrap()
}

/// Random smooth bump whose boundary keeps two coarse cells clear of every
/// root.
fn random_bump(f: &AffinePolynomial, rng: &mut ChaCha8Rng) -> Bump {
    let roots = complex_roots(f).unwrap().roots;
    loop {
        let center = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let radius = rng.gen_range(0.4..1.2);
        let b = Bump::smooth(center, radius).unwrap();
        if roots.iter().all(|&r| PlanarTest::boundary_distance(&b, r) > 0.06) {
            return b;
        }
    }
}

#[test]
fn quadrature_matches_root_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for trial in 0..20u64 {
        let d = 1 + (trial % 10) as u32;
        let f = kostlan(d, trial);
        for _ in 0..3 {
            let chi = random_bump(&f, &mut rng);
            let grid = QuadratureGrid::around(&chi, 1024).unwrap();
            let e = pm_weighted_count(&f, &chi, &grid).unwrap();
            assert!(e.error() < 1e-3 * d as f64, "d={d}: {e:?}");
        }
    }
}

#[test]
fn error_decreases_with_resolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for trial in 0..20u64 {
        let d = 2 + (trial % 9) as u32;
        let f = kostlan(d, 100 + trial);
        let chi = random_bump(&f, &mut rng);
        let rows = pm_convergence_study(&f, &chi, &[128, 512]).unwrap();
        assert!(rows[1].error < rows[0].error, "d={d}: {rows:?}");
    }
}

#[test]
fn plateau_counts_roots_inside() {
    // (z - 0.1)(z + 0.2i)(z - 2): two roots on the plateau, one far out.
    let roots = [Complex64::new(0.1, 0.0), Complex64::new(0.0, -0.2), Complex64::new(2.0, 0.0)];
    let coeffs = roots.iter().fold(vec![Complex64::new(1.0, 0.0)], |p, &r| {
        let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (k, &c) in p.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        next
    });
    let f = AffinePolynomial::univariate(coeffs);
    let chi = Bump::plateau(Complex64::new(0.0, 0.0), 0.5, 1.0).unwrap();
    // Δχ vanishes on the plateau and outside; only the collar contributes.
    assert_eq!(chi.laplacian(Complex64::new(0.3, 0.1)), 0.0);
    assert_eq!(chi.laplacian(Complex64::new(1.1, 0.0)), 0.0);
    assert!(chi.laplacian(Complex64::new(0.75, 0.0)) != 0.0);
    let grid = QuadratureGrid::around(&chi, 512).unwrap();
    let e = pm_weighted_count(&f, &chi, &grid).unwrap();
    assert!((e.value - 2.0).abs() < 1e-3, "{e:?}");
    // No root lies where Δχ is nonzero, so nothing needed correcting.
    assert_eq!(e.corrected_nodes, 0);
}

#[test]
fn linear_in_the_test_function() {
    let f = kostlan(6, 7);
    let a = Bump::smooth(Complex64::new(-0.4, 0.1), 0.7).unwrap();
    let b = Bump::smooth(Complex64::new(0.5, -0.3), 0.8).unwrap();
    let sum = BumpSum(vec![a, b]);
    // One grid for all three, large enough for both supports.
    let grid = QuadratureGrid::around(&sum, 1024).unwrap();
    let ea = pm_weighted_count(&f, &a, &grid).unwrap();
    let eb = pm_weighted_count(&f, &b, &grid).unwrap();
    let es = pm_weighted_count(&f, &sum, &grid).unwrap();
    assert!((es.value - ea.value - eb.value).abs() < 1e-9);
    assert!((es.direct - ea.direct - eb.direct).abs() < 1e-12);
    assert!(es.error() < 6e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn invariant_under_scaling(re in -3.0f64..3.0, im in -3.0f64..3.0, trial in 0u64..50) {
        prop_assume!(re.hypot(im) > 1e-3);
        let c = Complex64::new(re, im);
        let f = kostlan(5, trial);
        let scaled = AffinePolynomial::univariate(f.coeffs().iter().map(|&a| a * c).collect());
        let mut rng = ChaCha8Rng::seed_from_u64(trial);
        let chi = random_bump(&f, &mut rng);
        let grid = QuadratureGrid::around(&chi, 256).unwrap();
        let e1 = pm_weighted_count(&f, &chi, &grid).unwrap();
        let e2 = pm_weighted_count(&scaled, &chi, &grid).unwrap();
        prop_assert!((e1.value - e2.value).abs() < 1e-6, "{} vs {}", e1.value, e2.value);
    }
}

#[test]
fn degree_squared_factor_is_immaterial() {
    // The potential may use d f instead of f; at n = 1 this is a rescaling.
    let d = 8;
    let f = kostlan(d, 3);
    let df = AffinePolynomial::univariate(f.coeffs().iter().map(|&a| a * d as f64).collect());
    let chi = Bump::smooth(Complex64::new(0.1, 0.1), 0.9).unwrap();
    let grid = QuadratureGrid::around(&chi, 512).unwrap();
    let a = pm_weighted_count(&f, &chi, &grid).unwrap().value;
    let b = pm_weighted_count(&df, &chi, &grid).unwrap().value;
    assert!((a - b).abs() < 1e-6);
}
