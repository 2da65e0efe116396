//! The Kostlan weights against direct numerical integration of the
//! Fubini–Study L² product on the affine chart `z = 1` of CP².

use std::f64::consts::{PI, TAU};

use lefschetz_core::ensemble::{kostlan_weight, l2_inner_product, sample_section, EnsembleSpec, Field};
use lefschetz_core::poly::{Degree, HomogeneousPolynomial, MultiIndex, Space};
use num_complex::Complex64;

/// Gauss–Legendre nodes and weights on [0, 1], by Newton on P_n.
fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out
}

/// `∫_{CP²} conj(P) Q h^d dV` with the normalized FS volume, computed on
/// the chart with `u = R cos(psi) e^{i theta}`, `v = R sin(psi) e^{i phi}`,
/// `R = tan(beta)`. The volume element times the metric factor becomes
/// `sin^3(beta) cos^(2d+1)(beta) cos(psi) sin(psi)`, smooth on the box;
/// Gauss–Legendre in `beta`, `psi` and the trapezoid rule in the angles
/// (exact for the trigonometric polynomials that occur).
fn fs_integral(p: &HomogeneousPolynomial, q: &HomogeneousPolynomial, d: u32) -> Complex64 {
    let nodes = gauss_legendre_unit(48);
    let na = 2 * d as usize + 3;
    let mut acc = Complex64::new(0.0, 0.0);
    for &(t1, w1) in &nodes {
        let beta = t1 * PI / 2.0;
        let big_r = beta.tan();
        for &(t2, w2) in &nodes {
            let psi = t2 * PI / 2.0;
            let (r, s) = (big_r * psi.cos(), big_r * psi.sin());
            let weight = beta.sin().powi(3)
                * beta.cos().powi(2 * d as i32 + 1)
                * psi.cos()
                * psi.sin()
                * w1
                * w2
                * (PI / 2.0).powi(2);
            let mut inner = Complex64::new(0.0, 0.0);
            for a in 0..na {
                let th = TAU * a as f64 / na as f64;
                for b in 0..na {
                    let ph = TAU * b as f64 / na as f64;
                    let pt = [
                        Complex64::from_polar(r, th),
                        Complex64::from_polar(s, ph),
                        Complex64::new(1.0, 0.0),
                    ];
                    let pv = p.evaluate(&pt).unwrap().value;
                    let qv = q.evaluate(&pt).unwrap().value;
                    inner += pv.conj() * qv;
                }
            }
            acc += inner * weight * (TAU / na as f64).powi(2);
        }
    }
    acc * (2.0 / (PI * PI))
}

fn monomial(d: u32, e: [u32; 3]) -> HomogeneousPolynomial {
    HomogeneousPolynomial::from_real_terms(Space::Cp2, Degree::Total(d), &[(&e, 1.0)]).unwrap()
}

#[test]
fn monomial_norm_ratios_match_weights() {
    for d in 1..=5u32 {
        let top = monomial(d, [0, 0, d]);
        let base = fs_integral(&top, &top, d).re;
        for i in 0..=d {
            for j in 0..=(d - i) {
                let m = monomial(d, [i, j, d - i - j]);
                let ratio = fs_integral(&m, &m, d).re / base;
                let w = kostlan_weight(Space::Cp2, Degree::Total(d), &MultiIndex::new(vec![i, j, d - i - j])).unwrap();
                assert!((ratio * w - 1.0).abs() < 1e-6, "d={d} alpha=({i},{j}) ratio {ratio} w {w}");
            }
        }
    }
}

#[test]
fn distinct_monomials_are_orthogonal() {
    let d = 3;
    let a = monomial(d, [2, 1, 0]);
    let b = monomial(d, [1, 1, 1]);
    let top = monomial(d, [0, 0, d]);
    let base = fs_integral(&top, &top, d).re;
    assert!(fs_integral(&a, &b, d).norm() / base < 1e-9);
}

#[test]
fn inner_product_matches_integration_on_random_sections() {
    for d in [2u32, 4] {
        let spec = EnsembleSpec::new(Space::Cp2, d, Field::Complex, 31);
        let p = sample_section(&spec, 0);
        let q = sample_section(&spec, 1);
        let top = monomial(d, [0, 0, d]);
        let base = fs_integral(&top, &top, d).re;
        let numeric = fs_integral(&p, &q, d) / base;
        let closed = l2_inner_product(&p, &q).unwrap();
        assert!((numeric - closed).norm() < 1e-6 * closed.norm().max(1.0), "d={d}: {numeric} vs {closed}");
    }
}

#[test]
fn restriction_to_a_line_is_univariate_kostlan() {
    // Restricting a CP² Kostlan section to the line z = 0 gives the binary
    // form sum_{i+j=d} c_{ij0} x^i y^j, whose weights are the binomials.
    let d = 6;
    for i in 0..=d {
        let w2 = kostlan_weight(Space::Cp2, Degree::Total(d), &MultiIndex::new(vec![i, d - i, 0])).unwrap();
        let w1 = kostlan_weight(Space::Cp1, Degree::Total(d), &MultiIndex::new(vec![i, d - i])).unwrap();
        assert_eq!(w1, w2);
    }
}
