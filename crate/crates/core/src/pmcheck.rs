//! The one-variable Poincaré-Martinelli identity
//! `(1 / 4 pi) int Δχ log|f|^2 dA = sum_{f(z) = 0} χ(z)`, checked by
//! quadrature on the `CP1` chart.
//!
//! The constant: `dd^c log|z|^2 = δ_0` with `∂∂̄ = (Δ / 4) dz ∧ dz̄` and
//! `dz ∧ dz̄ = -2i dx ∧ dy` gives `Δ log|z|^2 = 4 pi δ_0`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{AffinePolynomial, Space};
use crate::uniroots::complex_roots;

/// Smallest accepted grid resolution.
pub const MIN_RESOLUTION: usize = 64;
/// Grid half-width as a multiple of the support radius.
const BOX_MARGIN: f64 = 1.25;

/// Radial test functions on the complex plane with closed-form Laplacians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Bump {
    /// `exp(1 - 1 / (1 - r^2 / R^2))` inside the disk of radius `R`, value 1
    /// at the center.
    Smooth { center: Complex64, radius: f64 },
    /// 1 on the disk of radius `inner`, 0 outside `outer`, with a smooth
    /// monotone collar between.
    Plateau { center: Complex64, inner: f64, outer: f64 },
}

fn h(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let e = (-1.0 / t).exp();
    let t2 = t * t;
    (e, e / t2, e * (1.0 / (t2 * t2) - 2.0 / (t2 * t)))
}

/// Smooth step from 1 at `t = 0` to 0 at `t = 1`, with two derivatives.
fn step(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (1.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let (b, b1, b2) = h(t);
    let (a, a1, a2) = h(1.0 - t);
    let (a1, a2) = (-a1, a2);
    let s = a + b;
    let (s1, s2) = (a1 + b1, a2 + b2);
    let num1 = a1 * s - a * s1;
    let p = a / s;
    let p1 = num1 / (s * s);
    let p2 = (a2 * s - a * s2) / (s * s) - 2.0 * s1 * num1 / (s * s * s);
    (p, p1, p2)
}

impl Bump {
    pub fn smooth(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("bump radius {radius} must be positive")));
        }
        Ok(Bump::Smooth { center, radius })
    }

    pub fn plateau(center: Complex64, inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner && outer.is_finite()) {
            return Err(Error::InvalidArgument(format!("plateau radii {inner}, {outer} must satisfy 0 < inner < outer")));
        }
        Ok(Bump::Plateau { center, inner, outer })
    }

    pub fn center(&self) -> Complex64 {
        match *self {
            Bump::Smooth { center, .. } | Bump::Plateau { center, .. } => center,
        }
    }

    /// Radius of the support.
    pub fn support_radius(&self) -> f64 {
        match *self {
            Bump::Smooth { radius, .. } => radius,
            Bump::Plateau { outer, .. } => outer,
        }
    }

    pub fn value(&self, z: Complex64) -> f64 {
        let r = (z - self.center()).norm();
        match *self {
            Bump::Smooth { radius, .. } => {
                let s = (r / radius).powi(2);
                if s >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - s)).exp()
                }
            }
            Bump::Plateau { inner, outer, .. } => step((r - inner) / (outer - inner)).0,
        }
    }

    /// `Δχ = χ_xx + χ_yy`.
    pub fn laplacian(&self, z: Complex64) -> f64 {
        let r = (z - self.center()).norm();
        match *self {
            Bump::Smooth { radius, .. } => {
                // χ = φ(s), s = r^2 / R^2: Δχ = (4 / R^2)(s φ'' + φ').
                let s = (r / radius).powi(2);
                if s >= 1.0 {
                    return 0.0;
                }
                let q = 1.0 - s;
                let phi = (1.0 - 1.0 / q).exp();
                let g1 = -1.0 / (q * q);
                let g2 = -2.0 / (q * q * q);
                let p1 = phi * g1;
                let p2 = phi * (g1 * g1 + g2);
                4.0 / (radius * radius) * (s * p2 + p1)
            }
            Bump::Plateau { inner, outer, .. } => {
                // Radial: χ'' + χ' / r, zero on the plateau and outside.
                let w = outer - inner;
                let t = (r - inner) / w;
                if t <= 0.0 || t >= 1.0 {
                    return 0.0;
                }
                let (_, p1, p2) = step(t);
                p2 / (w * w) + p1 / (w * r)
            }
        }
    }
}

/// A compactly supported test function on the complex plane.
pub trait PlanarTest: Sync {
    fn value(&self, z: Complex64) -> f64;
    fn laplacian(&self, z: Complex64) -> f64;
    /// A disk holding the support.
    fn support_disk(&self) -> (Complex64, f64);
    /// Distance from `z` to the nearest circle where the support ends.
    fn boundary_distance(&self, z: Complex64) -> f64;
}

impl PlanarTest for Bump {
    fn value(&self, z: Complex64) -> f64 {
        Bump::value(self, z)
    }

    fn laplacian(&self, z: Complex64) -> f64 {
        Bump::laplacian(self, z)
    }

    fn support_disk(&self) -> (Complex64, f64) {
        (self.center(), self.support_radius())
    }

    fn boundary_distance(&self, z: Complex64) -> f64 {
        ((z - self.center()).norm() - self.support_radius()).abs()
    }
}

/// Sum of bumps, for linearity checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpSum(pub Vec<Bump>);

impl PlanarTest for BumpSum {
    fn value(&self, z: Complex64) -> f64 {
        self.0.iter().map(|b| b.value(z)).sum()
    }

    fn laplacian(&self, z: Complex64) -> f64 {
        self.0.iter().map(|b| b.laplacian(z)).sum()
    }

    fn support_disk(&self) -> (Complex64, f64) {
        let Some(first) = self.0.first() else {
            return (Complex64::new(0.0, 0.0), 0.0);
        };
        let c = first.center();
        let r = self
            .0
            .iter()
            .map(|b| (b.center() - c).norm() + b.support_radius())
            .fold(0.0, f64::max);
        (c, r)
    }

    fn boundary_distance(&self, z: Complex64) -> f64 {
        self.0.iter().map(|b| PlanarTest::boundary_distance(b, z)).fold(f64::INFINITY, f64::min)
    }
}

/// Square midpoint grid around a bump.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub center: Complex64,
    pub half_width: f64,
    /// Nodes per axis.
    pub resolution: usize,
}

impl QuadratureGrid {
    /// Grid whose box strictly contains the bump's support.
    pub fn around(chi: &impl PlanarTest, resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::InvalidArgument(format!(
                "resolution {resolution} below the minimum {MIN_RESOLUTION}"
            )));
        }
        let (center, radius) = chi.support_disk();
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument("test function has empty support".into()));
        }
        Ok(QuadratureGrid {
            center,
            half_width: BOX_MARGIN * radius,
            resolution,
        })
    }

    /// Node spacing.
    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.resolution as f64
    }

    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        let h = self.step();
        let lo = self.center - Complex64::new(self.half_width, self.half_width);
        lo + Complex64::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)
    }

    pub fn weight(&self) -> f64 {
        self.step().powi(2)
    }
}

/// Result of one quadrature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PmEstimate {
    pub value: f64,
    /// `sum χ(root)` over the roots from the root solver.
    pub direct: f64,
    /// Nodes within one and a half cells of a root, where the logarithm was
    /// integrated exactly over the cell instead of sampled.
    pub corrected_nodes: usize,
    /// Contribution of those cells to `value`.
    pub corrected_mass: f64,
    /// Nodes moved by half a cell because `f` vanished there.
    pub jittered_nodes: usize,
}

impl PmEstimate {
    pub fn error(&self) -> f64 {
        (self.value - self.direct).abs()
    }
}

/// `int int log(x^2 + y^2) dx dy` as a function of the upper corner.
fn log_antiderivative(x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    if r2 == 0.0 {
        return 0.0;
    }
    let xy = x * y;
    let ax = if x == 0.0 { 0.0 } else { x * x * (y / x).atan() };
    let ay = if y == 0.0 { 0.0 } else { y * y * (x / y).atan() };
    xy * (r2.ln() - 3.0) + ax + ay
}

/// Mean of `log|z - root|^2` over the square of side `h` centered at `node`.
pub fn cell_mean_log(node: Complex64, h: f64, root: Complex64) -> f64 {
    let (x0, x1) = (node.re - 0.5 * h - root.re, node.re + 0.5 * h - root.re);
    let (y0, y1) = (node.im - 0.5 * h - root.im, node.im + 0.5 * h - root.im);
    let f = log_antiderivative;
    (f(x1, y1) - f(x0, y1) - f(x1, y0) + f(x0, y0)) / (h * h)
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Order-independent of thread count: a fixed binary tree over `xs`.
fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

fn univariate(f: &AffinePolynomial) -> Result<Vec<Complex64>> {
    if f.space() != Space::Cp1 {
        return Err(Error::InvalidArgument("the PM check works on the CP1 chart".into()));
    }
    Ok(f.coeffs().to_vec())
}

/// `(1 / 4 pi) sum_nodes w Δχ log|f|^2` over `grid`. In cells within one
/// and a half cells of a root the factor `log|z - root|^2` is replaced by
/// its exact cell mean, which keeps the sum invariant under `f -> c f`.
pub fn pm_weighted_count(f: &AffinePolynomial, chi: &impl PlanarTest, grid: &QuadratureGrid) -> Result<PmEstimate> {
    let coeffs = univariate(f)?;
    if coeffs.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    let roots = complex_roots(f)?.roots;
    let h = grid.step();
    let (c, support) = chi.support_disk();
    let margin = grid.half_width - (c - grid.center).re.abs().max((c - grid.center).im.abs());
    if margin <= support {
        return Err(Error::InvalidArgument("grid box must strictly contain the support".into()));
    }
    if let Some(r) = roots.iter().find(|&&r| chi.boundary_distance(r) <= 2.0 * h) {
        return Err(Error::InvalidArgument(format!(
            "root {r} within two cells of the support boundary"
        )));
    }
    let direct = roots.iter().map(|&r| chi.value(r)).sum();
    let near_radius = 1.5 * h;
    let n = grid.resolution;
    let rows: Vec<(f64, f64, usize, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut terms = Vec::with_capacity(n);
            let mut corrected = Vec::new();
            let mut jittered = 0;
            for j in 0..n {
                let mut z = grid.node(i, j);
                let lap = chi.laplacian(z);
                if lap == 0.0 {
                    continue;
                }
                let mut fz = horner(&coeffs, z);
                if fz.norm() == 0.0 {
                    z += Complex64::new(0.5 * h, 0.5 * h);
                    fz = horner(&coeffs, z);
                    jittered += 1;
                }
                let near: Vec<Complex64> = roots.iter().copied().filter(|r| (z - r).norm() < near_radius).collect();
                let log = if near.is_empty() {
                    fz.norm_sqr().ln()
                } else {
                    let node = grid.node(i, j);
                    let regular = near.iter().fold(fz.norm_sqr().ln(), |acc, &r| {
                        let d = (z - r).norm_sqr();
                        if d > 0.0 { acc - d.ln() } else { acc }
                    });
                    regular + near.iter().map(|&r| cell_mean_log(node, h, r)).sum::<f64>()
                };
                let term = lap * log;
                if !near.is_empty() {
                    corrected.push(term);
                }
                terms.push(term);
            }
            (pairwise_sum(&terms), pairwise_sum(&corrected), corrected.len(), jittered)
        })
        .collect();
    let scale = grid.weight() / (4.0 * PI);
    let row_sums: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let corrected_sums: Vec<f64> = rows.iter().map(|r| r.1).collect();
    Ok(PmEstimate {
        value: scale * pairwise_sum(&row_sums),
        direct,
        corrected_nodes: rows.iter().map(|r| r.2).sum(),
        corrected_mass: scale * pairwise_sum(&corrected_sums),
        jittered_nodes: rows.iter().map(|r| r.3).sum(),
    })
}

/// One row of a convergence table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub resolution: usize,
    pub estimate: f64,
    pub direct: f64,
    pub error: f64,
}

/// Errors against the direct root sum at each resolution.
pub fn pm_convergence_study(f: &AffinePolynomial, chi: &impl PlanarTest, resolutions: &[usize]) -> Result<Vec<ConvergenceRow>> {
    resolutions
        .iter()
        .map(|&res| {
            let grid = QuadratureGrid::around(chi, res)?;
            let e = pm_weighted_count(f, chi, &grid)?;
            Ok(ConvergenceRow {
                resolution: res,
                estimate: e.value,
                direct: e.direct,
                error: e.error(),
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "trial,bump,resolution,estimate,direct,error";

pub fn write_csv_rows<W: Write>(out: &mut W, trial: u64, bump: usize, rows: &[ConvergenceRow]) -> std::io::Result<()> {
    for r in rows {
        writeln!(out, "{trial},{bump},{},{:e},{:e},{:e}", r.resolution, r.estimate, r.direct, r.error)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_poly() -> AffinePolynomial {
        AffinePolynomial::univariate_real(&[0.0, 1.0])
    }

    #[test]
    fn antiderivative_matches_quadrature() {
        let node = Complex64::new(0.3, -0.2);
        let root = Complex64::new(0.35, -0.1);
        let h = 0.4;
        let m = 400;
        let mut acc = 0.0;
        for i in 0..m {
            for j in 0..m {
                let z = node + Complex64::new(h * ((i as f64 + 0.5) / m as f64 - 0.5), h * ((j as f64 + 0.5) / m as f64 - 0.5));
                acc += (z - root).norm_sqr().ln();
            }
        }
        acc /= (m * m) as f64;
        assert!((acc - cell_mean_log(node, h, root)).abs() < 1e-4);
        // A cell centered on the root has a finite mean below log of its
        // corner distance squared.
        let centered = cell_mean_log(root, h, root);
        assert!(centered.is_finite() && centered < (h * h / 2.0).ln());
    }

    #[test]
    fn laplacians_match_finite_differences() {
        let bumps = [
            Bump::smooth(Complex64::new(0.1, 0.2), 0.8).unwrap(),
            Bump::plateau(Complex64::new(-0.3, 0.0), 0.3, 0.9).unwrap(),
        ];
        let e = 1e-4;
        for b in bumps {
            for z in [Complex64::new(0.2, 0.1), Complex64::new(0.5, 0.4), Complex64::new(-0.7, 0.3)] {
                let fd = (b.value(z + e) + b.value(z - e) + b.value(z + Complex64::new(0.0, e))
                    + b.value(z - Complex64::new(0.0, e))
                    - 4.0 * b.value(z))
                    / (e * e);
                assert!((fd - b.laplacian(z)).abs() < 1e-4 * (1.0 + fd.abs()), "{b:?} {z}: {fd} vs {}", b.laplacian(z));
            }
        }
    }

    #[test]
    fn single_root_at_the_center() {
        let chi = Bump::smooth(Complex64::new(0.0, 0.0), 1.0).unwrap();
        assert_eq!(chi.value(Complex64::new(0.0, 0.0)), 1.0);
        let grid = QuadratureGrid::around(&chi, 512).unwrap();
        let e = pm_weighted_count(&z_poly(), &chi, &grid).unwrap();
        assert!((e.value - 1.0).abs() < 1e-3, "{e:?}");
        assert_eq!(e.direct, 1.0);
    }

    #[test]
    fn roots_outside_the_support_count_zero() {
        // (z - 3)(z + 2i)
        let f = AffinePolynomial::univariate(vec![
            Complex64::new(0.0, -6.0),
            Complex64::new(-3.0, 2.0),
            Complex64::new(1.0, 0.0),
        ]);
        let chi = Bump::smooth(Complex64::new(0.2, 0.1), 1.0).unwrap();
        let grid = QuadratureGrid::around(&chi, 256).unwrap();
        let e = pm_weighted_count(&f, &chi, &grid).unwrap();
        assert!(e.value.abs() < 1e-3 && e.direct == 0.0, "{e:?}");
        assert_eq!(e.corrected_nodes, 0);
    }

    #[test]
    fn rejects_bad_grids() {
        let chi = Bump::smooth(Complex64::new(0.0, 0.0), 1.0).unwrap();
        assert!(QuadratureGrid::around(&chi, 32).is_err());
        // Root on the support boundary.
        let f = AffinePolynomial::univariate_real(&[-1.0, 1.0]);
        let grid = QuadratureGrid::around(&chi, 128).unwrap();
        assert!(pm_weighted_count(&f, &chi, &grid).is_err());
        assert!(Bump::plateau(Complex64::new(0.0, 0.0), 0.5, 0.4).is_err());
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 500500.0);
    }
}
