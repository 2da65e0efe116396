use num_complex::Complex64;

use super::{Degree, Evaluation, HomogeneousPolynomial, MultiIndex, Space, UNIT_ROUNDOFF};
use crate::error::{Error, Result};

/// Chart representative `f_U` of a section on one of the standard affine charts.
///
/// Charts are numbered as follows. On `CP1`, chart `c` sets `x_c = 1` and
/// uses `u = x_{1-c}`. On `CP2`, chart `c` sets `x_c = 1` and uses the two
/// remaining variables in increasing index order as `(u, v)`. On `CP1 x CP1`,
/// chart `c = 2 c1 + c2` sets `x_{c1} = 1` on the first factor and
/// `y_{c2} = 1` on the second, with `u = x_{1-c1}`, `v = y_{1-c2}`.
///
/// Coefficients are stored densely: entry `i * dims[1] + j` multiplies `u^i v^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePolynomial {
    space: Space,
    chart: usize,
    degree: Degree,
    dims: [usize; 2],
    coeffs: Vec<Complex64>,
}

impl AffinePolynomial {
    /// Univariate polynomial `sum_k coeffs[k] u^k` on chart 0 of `CP1`.
    pub fn univariate(coeffs: Vec<Complex64>) -> Self {
        let d = coeffs.len().saturating_sub(1) as u32;
        AffinePolynomial {
            space: Space::Cp1,
            chart: 0,
            degree: Degree::Total(d),
            dims: [coeffs.len(), 1],
            coeffs,
        }
    }

    /// Univariate polynomial from real coefficients.
    pub fn univariate_real(coeffs: &[f64]) -> Self {
        Self::univariate(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub(super) fn from_homogeneous(p: &HomogeneousPolynomial, chart: usize) -> Result<Self> {
        let space = p.space();
        if chart >= space.num_charts() {
            return Err(Error::InvalidArgument(format!(
                "chart {chart} invalid for {space}"
            )));
        }
        let dims = match (space, p.degree()) {
            (Space::Cp1, Degree::Total(d)) => [d as usize + 1, 1],
            (Space::Cp2, Degree::Total(d)) => [d as usize + 1, d as usize + 1],
            (Space::Cp1xCp1, Degree::Bi(a, b)) => [a as usize + 1, b as usize + 1],
            _ => unreachable!("degree validated at construction"),
        };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dims[0] * dims[1]];
        for (alpha, c) in p.terms() {
            let (i, j) = chart_exponents(space, chart, alpha.exponents());
            coeffs[i * dims[1] + j] += *c;
        }
        Ok(AffinePolynomial {
            space,
            chart,
            degree: p.degree(),
            dims,
            coeffs,
        })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        if self.space == Space::Cp1 {
            1
        } else {
            2
        }
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    pub fn coeff(&self, i: usize, j: usize) -> Complex64 {
        if i < self.dims[0] && j < self.dims[1] {
            self.coeffs[i * self.dims[1] + j]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Dense coefficient array (see the type docs for the layout).
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Largest total chart degree carrying a nonzero coefficient.
    pub fn degree_bound(&self) -> u32 {
        let mut best = 0;
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                if self.coeffs[i * self.dims[1] + j] != Complex64::new(0.0, 0.0) {
                    best = best.max((i + j) as u32);
                }
            }
        }
        best
    }

    /// Homogeneous coordinates of the chart point `point`.
    pub fn lift(&self, point: &[Complex64]) -> Vec<Complex64> {
        lift(self.space, self.chart, point)
    }

    /// Nested Horner evaluation with an a-priori rounding bound.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Evaluation> {
        if point.len() != self.num_vars() {
            return Err(Error::InvalidArgument(format!(
                "chart point has {} coordinates, {} expected",
                point.len(),
                self.num_vars()
            )));
        }
        let u = point[0];
        let v = if point.len() > 1 { point[1] } else { Complex64::new(0.0, 0.0) };
        let (au, av) = (u.norm(), v.norm());
        let mut value = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for i in (0..self.dims[0]).rev() {
            let mut inner = Complex64::new(0.0, 0.0);
            let mut inner_mag = 0.0;
            for j in (0..self.dims[1]).rev() {
                let c = self.coeffs[i * self.dims[1] + j];
                inner = inner * v + c;
                inner_mag = inner_mag * av + c.norm();
            }
            value = value * u + inner;
            magnitude = magnitude * au + inner_mag;
        }
        let steps = 4.0 * (self.dims[0] + self.dims[1]) as f64 + 2.0;
        Ok(Evaluation {
            value,
            error_bound: 1.01 * steps * UNIT_ROUNDOFF * magnitude,
            magnitude,
        })
    }

    /// Inverse of [`HomogeneousPolynomial::dehomogenize`].
    pub fn homogenize(&self) -> Result<HomogeneousPolynomial> {
        let mut terms = Vec::new();
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                let c = self.coeffs[i * self.dims[1] + j];
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let alpha = homogeneous_exponents(self.space, self.chart, self.degree, i, j)?;
                terms.push((MultiIndex::new(alpha), c));
            }
        }
        HomogeneousPolynomial::from_terms(self.space, self.degree, terms)
    }
}

/// Chart exponents `(i, j)` of `u^i v^j` for a homogeneous multi-index.
pub(crate) fn chart_exponents(space: Space, chart: usize, alpha: &[u32]) -> (usize, usize) {
    match space {
        Space::Cp1 => (alpha[1 - chart] as usize, 0),
        Space::Cp2 => {
            let others = other_vars(chart);
            (alpha[others[0]] as usize, alpha[others[1]] as usize)
        }
        Space::Cp1xCp1 => {
            let (c1, c2) = (chart / 2, chart % 2);
            (alpha[1 - c1] as usize, alpha[2 + 1 - c2] as usize)
        }
    }
}

fn homogeneous_exponents(
    space: Space,
    chart: usize,
    degree: Degree,
    i: usize,
    j: usize,
) -> Result<Vec<u32>> {
    let (i, j) = (i as u32, j as u32);
    let bad = || Error::InvalidArgument(format!("monomial u^{i} v^{j} exceeds degree {degree:?}"));
    match (space, degree) {
        (Space::Cp1, Degree::Total(d)) => {
            let rest = d.checked_sub(i).ok_or_else(bad)?;
            let mut a = vec![0; 2];
            a[chart] = rest;
            a[1 - chart] = i;
            Ok(a)
        }
        (Space::Cp2, Degree::Total(d)) => {
            let rest = d.checked_sub(i + j).ok_or_else(bad)?;
            let others = other_vars(chart);
            let mut a = vec![0; 3];
            a[chart] = rest;
            a[others[0]] = i;
            a[others[1]] = j;
            Ok(a)
        }
        (Space::Cp1xCp1, Degree::Bi(d1, d2)) => {
            let (c1, c2) = (chart / 2, chart % 2);
            let r1 = d1.checked_sub(i).ok_or_else(bad)?;
            let r2 = d2.checked_sub(j).ok_or_else(bad)?;
            let mut a = vec![0; 4];
            a[c1] = r1;
            a[1 - c1] = i;
            a[2 + c2] = r2;
            a[2 + 1 - c2] = j;
            Ok(a)
        }
        _ => Err(bad()),
    }
}

/// The two variables of `CP2` that survive in chart `chart`.
pub(crate) fn other_vars(chart: usize) -> [usize; 2] {
    match chart {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

/// Homogeneous coordinates of a chart point.
pub fn lift(space: Space, chart: usize, point: &[Complex64]) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    match space {
        Space::Cp1 => {
            let mut v = vec![one; 2];
            v[1 - chart] = point[0];
            v
        }
        Space::Cp2 => {
            let others = other_vars(chart);
            let mut v = vec![one; 3];
            v[others[0]] = point[0];
            v[others[1]] = point[1];
            v
        }
        Space::Cp1xCp1 => {
            let (c1, c2) = (chart / 2, chart % 2);
            let mut v = vec![one; 4];
            v[1 - c1] = point[0];
            v[2 + 1 - c2] = point[1];
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{sample_section, EnsembleSpec, Field};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn sum_of_squares_in_chart_z() {
        let p = HomogeneousPolynomial::from_real_terms(
            Space::Cp2,
            Degree::Total(2),
            &[(&[2, 0, 0], 1.0), (&[0, 2, 0], 1.0), (&[0, 0, 2], 1.0)],
        )
        .unwrap();
        let a = p.dehomogenize(2).unwrap();
        assert_eq!(a.coeff(2, 0), c(1.0));
        assert_eq!(a.coeff(0, 2), c(1.0));
        assert_eq!(a.coeff(0, 0), c(1.0));
        assert_eq!(a.coeffs().iter().filter(|z| z.norm() > 0.0).count(), 3);
    }

    #[test]
    fn linear_on_cp1() {
        let p = HomogeneousPolynomial::from_real_terms(Space::Cp1, Degree::Total(1), &[(&[1, 0], 1.0)])
            .unwrap();
        let a = p.dehomogenize(1).unwrap();
        assert_eq!(a.coeff(1, 0), c(1.0));
        assert_eq!(a.coeff(0, 0), c(0.0));
    }

    #[test]
    fn dehomogenize_matches_lifted_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for space in [Space::Cp1, Space::Cp2, Space::Cp1xCp1] {
            let p = sample_section(&EnsembleSpec::new(space, 7, Field::Complex, 2), 0);
            let scale = p.max_abs_coeff();
            for chart in 0..space.num_charts() {
                let a = p.dehomogenize(chart).unwrap();
                for _ in 0..100 {
                    let q: Vec<Complex64> = (0..a.num_vars())
                        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                        .collect();
                    let lifted = a.lift(&q);
                    let x = p.evaluate(&lifted).unwrap().value;
                    let y = a.evaluate(&q).unwrap().value;
                    assert!((x - y).norm() < 1e-12 * scale * 50.0, "{space} chart {chart}");
                }
                assert_eq!(a.homogenize().unwrap(), p);
            }
        }
    }
}
