//! Univariate solving: complex roots with residual certificates, and exact
//! real-root counting and isolation.

mod aberth;
mod companion;
mod inclusion;
mod sturm;

pub use aberth::{aberth, aberth_roots, initial_approximations, polynomial_newton, NewtonStep};
pub use companion::companion_roots;
pub use inclusion::{certified_real_count, components, inclusion_disks, snap_real, InclusionDisk};
pub use sturm::{
    isolate_real_roots, isolate_real_roots_to, sturm_count_real_roots, IntPoly, RealDomain,
    RootInterval, SturmSequence,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::AffinePolynomial;

/// Coefficients below this fraction of the largest are dropped from the top.
pub const TRIM_TOLERANCE: f64 = 1e-14;
/// Largest accepted backward error of a returned root.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Above this degree the companion eigensolve gives way to Aberth iteration.
pub const COMPANION_MAX_DEGREE: usize = 60;

/// Roots of a univariate polynomial, listed with multiplicity.
///
/// `residuals[k]` is the normwise backward error
/// `|p(z)| / sum |c_i| |z|^i` at `roots[k]`; `multiplicities[k]` is the size
/// of the inclusion cluster the root belongs to (1 for a certified simple
/// root). Members of one cluster are reported at the cluster centroid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub warning: Option<String>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn all_simple(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }
}

/// Normwise backward error of `z` as a root of `c`.
pub fn backward_error(c: &[Complex64], z: Complex64) -> f64 {
    let az = z.norm();
    if az > 1.0 {
        let w = z.inv();
        let aw = w.norm();
        let mut p = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for &ci in c {
            p = p * w + ci;
            mag = mag * aw + ci.norm();
        }
        return if mag > 0.0 { p.norm() / mag } else { 0.0 };
    }
    let mut p = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for &ci in c.iter().rev() {
        p = p * z + ci;
        mag = mag * az + ci.norm();
    }
    if mag > 0.0 {
        p.norm() / mag
    } else {
        0.0
    }
}

/// Drops leading coefficients below `TRIM_TOLERANCE` times the largest one.
pub fn trim_leading(c: &[Complex64]) -> &[Complex64] {
    let max = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut n = c.len();
    while n > 1 && c[n - 1].norm() <= TRIM_TOLERANCE * max {
        n -= 1;
    }
    &c[..n]
}

fn newton_polish(c: &[Complex64], z: &mut Complex64) {
    let mut best = backward_error(c, *z);
    for _ in 0..4 {
        let Some(step) = polynomial_newton(c, *z) else { return };
        let cand = *z - step.correction;
        let err = backward_error(c, cand);
        if !(err < best) {
            return;
        }
        best = err;
        *z = cand;
    }
}

/// Complex roots of a univariate polynomial given by coefficients (constant
/// term first), with clustering of multiple roots.
pub fn complex_roots_of(coeffs: &[Complex64]) -> Result<RootSet> {
    let c = trim_leading(coeffs);
    let n = c.len() - 1;
    if n == 0 {
        return Ok(RootSet {
            warning: Some("polynomial has degree 0 after trimming".into()),
            ..RootSet::default()
        });
    }
    let mut z = if n <= COMPANION_MAX_DEGREE {
        companion_roots(c).unwrap_or_else(|| aberth_roots(c).0)
    } else {
        aberth_roots(c).0
    };
    let raw = z.clone();
    for zi in z.iter_mut() {
        newton_polish(c, zi);
    }
    // Separate exact duplicates so the inclusion disks are defined.
    for i in 0..n {
        for j in 0..i {
            if z[i] == z[j] {
                let bump = 1e-12 * z[i].norm().max(1e-300);
                z[i] += Complex64::new(0.0, bump);
            }
        }
    }
    let mut multiplicities = vec![1; n];
    if let Some(disks) = inclusion_disks(c, &z) {
        for comp in components(&disks) {
            if comp.len() > 1 {
                // Newton drifts unevenly inside a cluster; the mean of the
                // unpolished approximations is the better estimate.
                let centroid = comp.iter().map(|&i| raw[i]).sum::<Complex64>() / comp.len() as f64;
                for &i in &comp {
                    z[i] = centroid;
                    multiplicities[i] = comp.len();
                }
            }
        }
    }
    let residuals: Vec<f64> = z.iter().map(|&r| backward_error(c, r)).collect();
    if let Some((k, r)) = residuals
        .iter()
        .enumerate()
        .find(|(_, r)| !(**r < RESIDUAL_TOLERANCE))
    {
        return Err(Error::degenerate(format!(
            "root {k} has backward error {r:.3e}"
        )));
    }
    Ok(RootSet {
        roots: z,
        residuals,
        multiplicities,
        warning: None,
    })
}

/// Complex roots of a one-variable chart polynomial.
pub fn complex_roots(p: &AffinePolynomial) -> Result<RootSet> {
    if p.num_vars() != 1 {
        return Err(Error::InvalidArgument(
            "complex_roots expects a univariate polynomial".into(),
        ));
    }
    complex_roots_of(p.coeffs())
}

/// How a real-root count was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    InclusionDisks,
    Sturm,
}

/// Exact number of distinct real roots of the real polynomial with the given
/// double coefficients (constant term first, taken as exact dyadic values).
/// Isolated inclusion disks settle the generic case; Sturm sequences in
/// exact arithmetic settle everything else.
pub fn real_root_count(coeffs: &[f64]) -> Result<(usize, CountMethod)> {
    let p = IntPoly::from_f64(coeffs)?;
    let n = coeffs.iter().rposition(|&x| x != 0.0).unwrap_or(0);
    let c = &coeffs[..=n];
    if n >= 1 && c[0] != 0.0 {
        let cc: Vec<Complex64> = c.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let (z, ok) = aberth_roots(&cc);
        if ok {
            if let Some(k) = certified_real_count(c, &z) {
                return Ok((k, CountMethod::InclusionDisks));
            }
        }
    }
    Ok((
        sturm_count_real_roots(&p, &RealDomain::Line),
        CountMethod::Sturm,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn z_squared_plus_one() {
        let p = AffinePolynomial::univariate_real(&[1.0, 0.0, 1.0]);
        let mut r = complex_roots(&p).unwrap();
        r.roots.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((r.roots[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((r.roots[1] - c(0.0, 1.0)).norm() < 1e-14);
        assert!(r.all_simple());
    }

    #[test]
    fn triple_root_is_flagged() {
        let p = AffinePolynomial::univariate_real(&[-1.0, 3.0, -3.0, 1.0]);
        let r = complex_roots(&p).unwrap();
        assert_eq!(r.len(), 3);
        for (z, m) in r.roots.iter().zip(&r.multiplicities) {
            assert_eq!(*m, 3);
            assert!((z - c(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn degree_zero_warns() {
        let p = AffinePolynomial::univariate_real(&[2.0, 1e-20]);
        let r = complex_roots(&p).unwrap();
        assert!(r.is_empty());
        assert!(r.warning.is_some());
    }

    #[test]
    fn rejects_bivariate() {
        let p = crate::poly::HomogeneousPolynomial::from_real_terms(
            crate::poly::Space::Cp2,
            crate::poly::Degree::Total(1),
            &[(&[1, 0, 0], 1.0)],
        )
        .unwrap();
        assert!(complex_roots(&p.dehomogenize(0).unwrap()).is_err());
    }

    #[test]
    fn counts_agree_on_simple_cases() {
        assert_eq!(real_root_count(&[-1.0, 0.0, 1.0]).unwrap().0, 2);
        assert_eq!(real_root_count(&[1.0, 0.0, 1.0]).unwrap().0, 0);
        assert_eq!(real_root_count(&[0.0, -1.0, 0.0, 1.0]).unwrap().0, 3);
        assert_eq!(real_root_count(&[1.0, -2.0, 1.0]).unwrap().0, 1);
    }
}
