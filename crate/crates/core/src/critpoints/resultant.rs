//! Resultant `Res_s(g, g_s)` of the chart polynomial: a floating-point
//! version by evaluation and interpolation, and an exact one over the
//! rationals for small degrees.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::pencil::{Bivariate, Chart, ChartMap, PencilModel};
use super::solver::{back_substitute, polish, ChartSolution};
use crate::error::{Error, Result};
use crate::poly::{ExactPolynomial, HomogeneousPolynomial, Space};
use crate::uniroots::complex_roots_of;

/// Sylvester matrix rows for `a` (formal degree `a.len() - 1`) and `b`,
/// coefficients ascending.
fn sylvester<T: Clone + Zero>(a: &[T], b: &[T]) -> Vec<Vec<T>> {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![T::zero(); size];
        for (k, c) in a.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![T::zero(); size];
        for (k, c) in b.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Determinant of the Sylvester matrix of `a` and `b` (ascending
/// coefficients, formal degrees from the lengths).
pub fn sylvester_determinant(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let rows = sylvester(a, b);
    let n = rows.len();
    if n == 0 {
        return Complex64::one();
    }
    DMatrix::from_fn(n, n, |i, j| rows[i][j]).determinant()
}

/// Coefficients in `t` (ascending) of `Res_s(g, g_s)`, from samples on the
/// unit circle and an inverse DFT. The sample count `2 n m + 1` exceeds the
/// degree bound `(2n - 1) m` for `s`-degree `n` and `t`-degree `m`.
pub fn resultant_numeric(g: &Bivariate) -> Vec<Complex64> {
    let n = g.degree_s();
    let m = g.coeffs.iter().map(|c| c.len() - 1).max().unwrap_or(0);
    let count = 2 * n * m + 1;
    let samples: Vec<Complex64> = (0..count)
        .map(|j| {
            let t = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / count as f64);
            let (a, _) = g.at_t(t);
            sylvester_determinant(&a, &Bivariate::derivative_s_at(&a))
        })
        .collect();
    let bound = (2 * n).saturating_sub(1) * m;
    (0..=bound)
        .map(|k| {
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -std::f64::consts::TAU * (j * k) as f64 / count as f64))
                .sum();
            sum / count as f64
        })
        .collect()
}

/// Critical points through the numeric resultant: its roots, back-substituted
/// and polished. Roots where the fiber degree drops are discarded.
pub fn solve_via_resultant(f: &HomogeneousPolynomial, pencil: PencilModel) -> Result<Vec<ChartSolution>> {
    let g = ChartMap::new(pencil).bivariate(f)?;
    let mut r = resultant_numeric(&g);
    let scale = r.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while r.len() > 1 && r.last().is_some_and(|c| c.norm() <= 1e-10 * scale) {
        r.pop();
    }
    let roots = complex_roots_of(&r).or_else(|e| {
        if e.is_degenerate() {
            Err(Error::degenerate(format!("resultant: {e}")))
        } else {
            Err(e)
        }
    })?;
    let lead = &g.coeffs[g.degree_s()];
    let lead_scale = lead.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut out = Vec::new();
    for &t in &roots.roots {
        let (a, _) = g.at_t(t);
        if a[a.len() - 1].norm() <= 1e-8 * lead_scale * (1.0 + t.norm()).powi(lead.len() as i32) {
            continue;
        }
        let sol = back_substitute(&g, Chart::Near, t).ok_or_else(|| Error::degenerate("back-substitution failed"))?;
        let (s, t) = polish(&g, sol.s, sol.t);
        out.push(ChartSolution { s, t, ..sol });
    }
    Ok(out)
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        for r in (c + 1)..n {
            for k in (c + 1)..n {
                let v = &m[r][k] * &m[c][c] - &m[r][c] * &m[c][k];
                m[r][k] = v / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[c][c].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Ascending coefficients of the polynomial through `(nodes[i], ys[i])`,
/// by Newton divided differences.
fn interpolate(nodes: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    let n = ys.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&nodes[i] - &nodes[i - level]);
        }
    }
    // Horner in the Newton basis: p = dd[n-1]; p = p (x - x_k) + dd[k].
    let mut p = vec![dd[n - 1].clone()];
    for k in (0..n - 1).rev() {
        let mut next = vec![BigRational::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &nodes[k];
        }
        next[0] += &dd[k];
        p = next;
    }
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Exact `Res_x(f, f_x)` restricted to `z = 1`, as a polynomial in `y`
/// (ascending rational coefficients). Only for `CP2`.
pub fn resultant_exact(f: &ExactPolynomial) -> Result<Vec<BigRational>> {
    if f.space() != Space::Cp2 {
        return Err(Error::InvalidArgument("exact resultant is implemented on CP2".into()));
    }
    let d = f.degree().total() as usize;
    // Clear the (power-of-two) denominators: the resultant changes by a
    // positive constant only.
    let lcm = f
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let ints: Vec<(u32, u32, BigInt)> = f
        .terms()
        .map(|(alpha, c)| {
            let e = alpha.exponents();
            (e[0], e[1], (c * BigRational::from_integer(lcm.clone())).to_integer())
        })
        .collect();
    let in_x = |y: &BigInt| {
        let mut a = vec![BigInt::zero(); d + 1];
        for (ex, ey, c) in &ints {
            a[*ex as usize] += c * num_traits::pow(y.clone(), *ey as usize);
        }
        let b: Vec<BigInt> = a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
        (a, b)
    };
    let bound = d * d.saturating_sub(1);
    let half = (bound / 2) as i64;
    let nodes: Vec<BigInt> = (0..=bound as i64).map(|k| BigInt::from(k - half)).collect();
    let values: Vec<BigRational> = nodes
        .iter()
        .map(|y| {
            let (a, b) = in_x(y);
            BigRational::from_integer(determinant(sylvester(&a, &b)))
        })
        .collect();
    let nodes: Vec<BigRational> = nodes.into_iter().map(BigRational::from_integer).collect();
    let r = interpolate(&nodes, &values);
    if r.iter().all(|c| c.is_zero()) {
        return Err(Error::degenerate("resultant vanishes identically"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Degree;

    #[test]
    fn interpolation_recovers_cubic() {
        let q = |x: i64| BigRational::from_integer((2 * x * x * x - 3 * x + 5).into());
        let nodes: Vec<BigRational> = (-2..4).map(|x: i64| BigRational::from_integer(x.into())).collect();
        let c = interpolate(&nodes, &(-2..4).map(q).collect::<Vec<_>>());
        let want: Vec<BigRational> = [5, -3, 0, 2].iter().map(|&v: &i64| BigRational::from_integer(v.into())).collect();
        assert_eq!(c, want);
    }

    #[test]
    fn circle_resultant() {
        // Res_x(x^2 + y^2 - 1, 2x) = 4 (y^2 - 1).
        let f = HomogeneousPolynomial::from_real_terms(
            Space::Cp2,
            Degree::Total(2),
            &[(&[2, 0, 0], 1.0), (&[0, 2, 0], 1.0), (&[0, 0, 2], -1.0)],
        )
        .unwrap();
        let r = resultant_exact(&f.to_exact()).unwrap();
        let want: Vec<BigRational> = [-4, 0, 4].iter().map(|&v: &i64| BigRational::from_integer(v.into())).collect();
        assert_eq!(r, want);
    }

    #[test]
    fn sylvester_of_linear_factors() {
        // Res(x - 2, x - 5) = 2 - 5 up to sign convention: (x-2) at 5 = 3.
        let c = |v: f64| Complex64::new(v, 0.0);
        let r = sylvester_determinant(&[c(-2.0), c(1.0)], &[c(-5.0), c(1.0)]);
        assert!((r.norm() - 3.0).abs() < 1e-12);
    }
}
