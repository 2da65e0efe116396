use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{AffinePolynomial, Degree, HomogeneousPolynomial, Space};

/// Rotation angle applied to the fiber coordinates before solving, so that
/// no critical point sits at the chart's point at infinity.
const FIBER_ANGLE: f64 = 0.618_033_988_749_894_8;
/// Rotation angle for the second factor of `CP1 x CP1`.
const SECOND_ANGLE: f64 = 0.414_213_562_373_095_1;

/// The fixed pencil whose critical points are computed.
///
/// On `CP2`: the lines through `[1:0:0]`, `p([x:y:z]) = [y:z]`, fiber
/// direction `d/dx`. On `CP1 x CP1`: the projection to the first factor,
/// fiber direction along the second factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PencilModel {
    ProjectionFromPoint,
    FirstFactor,
}

impl PencilModel {
    pub fn for_space(space: Space) -> Result<Self> {
        match space {
            Space::Cp2 => Ok(PencilModel::ProjectionFromPoint),
            Space::Cp1xCp1 => Ok(PencilModel::FirstFactor),
            Space::Cp1 => Err(Error::InvalidArgument(
                "critical points need a surface (CP2 or CP1xCP1)".into(),
            )),
        }
    }

    pub fn space(self) -> Space {
        match self {
            PencilModel::ProjectionFromPoint => Space::Cp2,
            PencilModel::FirstFactor => Space::Cp1xCp1,
        }
    }

    /// Expected number of critical points on a generic curve of the given
    /// degree: `d(d-1)` on `CP2`, `2 a (b-1)` for bidegree `(a, b)`.
    pub fn expected_count(self, degree: Degree) -> usize {
        match degree {
            Degree::Total(d) => (d as usize) * (d as usize).saturating_sub(1),
            Degree::Bi(a, b) => 2 * a as usize * (b as usize).saturating_sub(1),
        }
    }
}

/// The two charts of the pencil's base `CP1`: `Near` uses the fiber label
/// `t` (for `|t| <= 1`), `Far` uses `w = 1/t`. Solving in the chart where
/// the label is bounded keeps every evaluation well scaled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    Near,
    Far,
}

/// Real affine parametrisation `(s, t) -> v(s, t)` of a dense open subset of
/// the space: `s` runs along the fibers, `t` labels the fiber. Each
/// homogeneous coordinate is affine-linear in `(s, t)`.
#[derive(Clone, Copy, Debug)]
pub struct ChartMap {
    pencil: PencilModel,
    /// `(cos, sin)` of the fiber rotation.
    rot1: (f64, f64),
    /// `(cos, sin)` of the second-factor rotation (`CP1 x CP1` only).
    rot2: (f64, f64),
}

impl ChartMap {
    pub fn new(pencil: PencilModel) -> Self {
        ChartMap {
            pencil,
            rot1: (FIBER_ANGLE.cos(), FIBER_ANGLE.sin()),
            rot2: (SECOND_ANGLE.cos(), SECOND_ANGLE.sin()),
        }
    }

    pub fn pencil(&self) -> PencilModel {
        self.pencil
    }

    /// `v(0, 0)`, `dv/ds` and `dv/dt` in the given chart.
    pub fn frame(&self, chart: Chart) -> [Vec<f64>; 3] {
        let (c, sn) = self.rot1;
        match (self.pencil, chart) {
            // (y, z) = R (t, 1), R = [[c, -sn], [sn, c]]; far: R (1, w).
            (PencilModel::ProjectionFromPoint, Chart::Near) => {
                [vec![0.0, -sn, c], vec![1.0, 0.0, 0.0], vec![0.0, c, sn]]
            }
            (PencilModel::ProjectionFromPoint, Chart::Far) => {
                [vec![0.0, c, sn], vec![1.0, 0.0, 0.0], vec![0.0, -sn, c]]
            }
            // (x0, x1) = R1 (1, t), far R1 (w, 1); (y0, y1) = R2 (1, s).
            (PencilModel::FirstFactor, chart) => {
                let (c2, s2) = self.rot2;
                let ds = vec![0.0, 0.0, -s2, c2];
                match chart {
                    Chart::Near => [vec![c, sn, c2, s2], ds, vec![-sn, c, 0.0, 0.0]],
                    Chart::Far => [vec![-sn, c, c2, s2], ds, vec![c, sn, 0.0, 0.0]],
                }
            }
        }
    }

    /// Homogeneous coordinates of the chart point `(s, t)`.
    pub fn point_in(&self, chart: Chart, s: Complex64, t: Complex64) -> Vec<Complex64> {
        let [o, ds, dt] = self.frame(chart);
        (0..o.len()).map(|k| s * ds[k] + t * dt[k] + o[k]).collect()
    }

    /// Homogeneous coordinates of the near-chart point `(s, t)`.
    pub fn point(&self, s: Complex64, t: Complex64) -> Vec<Complex64> {
        self.point_in(Chart::Near, s, t)
    }

    /// `dv/ds` and `dv/dt` in the near chart.
    pub fn tangents(&self) -> (Vec<f64>, Vec<f64>) {
        let [_, ds, dt] = self.frame(Chart::Near);
        (ds, dt)
    }

    /// Chart and chart coordinates `(s, t)` of a homogeneous point: the
    /// near chart when the fiber label has modulus at most one.
    pub fn locate(&self, v: &[Complex64]) -> Option<(Chart, Complex64, Complex64)> {
        let (c, sn) = self.rot1;
        // Rotated base coordinates (b0, b1) with t = b0/b1 in the near chart.
        let (b0, b1) = match self.pencil {
            PencilModel::ProjectionFromPoint => (v[1] * c + v[2] * sn, -v[1] * sn + v[2] * c),
            PencilModel::FirstFactor => (-v[0] * sn + v[1] * c, v[0] * c + v[1] * sn),
        };
        let (chart, t, scale) = if b0.norm() <= b1.norm() {
            (Chart::Near, b0 / b1, b1)
        } else {
            (Chart::Far, b1 / b0, b0)
        };
        if scale.norm() == 0.0 {
            return None;
        }
        let s = match self.pencil {
            PencilModel::ProjectionFromPoint => v[0] / scale,
            PencilModel::FirstFactor => {
                let (c2, s2) = self.rot2;
                let y0 = v[2] * c2 + v[3] * s2;
                let y1 = -v[2] * s2 + v[3] * c2;
                if y0.norm() == 0.0 {
                    return None;
                }
                y1 / y0
            }
        };
        Some((chart, s, t))
    }

    /// Near-chart coordinates `(s, t)` of a homogeneous point, if it lies in
    /// the chart.
    pub fn coordinates(&self, v: &[Complex64]) -> Option<(Complex64, Complex64)> {
        match self.locate(v)? {
            (Chart::Near, s, t) => Some((s, t)),
            (Chart::Far, s, w) => {
                if w.norm() == 0.0 {
                    return None;
                }
                match self.pencil {
                    PencilModel::ProjectionFromPoint => Some((s / w, w.inv())),
                    PencilModel::FirstFactor => Some((s, w.inv())),
                }
            }
        }
    }

    /// The section in near-chart coordinates: `g(s, t) = f(v(s, t))`.
    pub fn bivariate(&self, f: &HomogeneousPolynomial) -> Result<Bivariate> {
        let (c, sn) = self.rot1;
        let rc = |c: f64, s: f64| {
            [
                [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
            ]
        };
        match (self.pencil, f.degree()) {
            (PencilModel::ProjectionFromPoint, Degree::Total(d)) => {
                let rotated = f.linear_substitution(1, 2, rc(c, sn))?;
                // Chart z' = 1: u = x = s, v = y' = t.
                let a = rotated.dehomogenize(2)?;
                let t_degrees = (0..=d as usize).map(|i| d as usize - i).collect();
                Ok(Bivariate::from_affine(&a, false, t_degrees))
            }
            (PencilModel::FirstFactor, Degree::Bi(da, db)) => {
                let (c2, s2) = self.rot2;
                let rotated = f
                    .linear_substitution(0, 1, rc(c, sn))?
                    .linear_substitution(2, 3, rc(c2, s2))?;
                // Chart x0' = y0' = 1: u = x1' = t, v = y1' = s.
                let a = rotated.dehomogenize(0)?;
                Ok(Bivariate::from_affine(&a, true, vec![da as usize; db as usize + 1]))
            }
            _ => Err(Error::Mismatch(format!("{} section for a {:?} pencil", f.space(), self.pencil))),
        }
    }
}

/// Dense `g(s, t) = sum_i a_i(t) s^i`, each `a_i` a polynomial in `t`
/// (constant term first).
#[derive(Clone, Debug)]
pub struct Bivariate {
    pub coeffs: Vec<Vec<Complex64>>,
    /// Formal `t`-degree of each `a_i`, so that the section is a form on
    /// the base `CP1`.
    pub t_degrees: Vec<usize>,
}

/// Values of `g` and the derivatives entering the critical system at one
/// point.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub g: Complex64,
    pub gs: Complex64,
    pub gt: Complex64,
    pub gss: Complex64,
    pub gst: Complex64,
}

fn horner_with_derivative(c: &[Complex64], t: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ci in c.iter().rev() {
        dp = dp * t + p;
        p = p * t + ci;
    }
    (p, dp)
}

impl Bivariate {
    fn from_affine(a: &AffinePolynomial, transposed: bool, t_degrees: Vec<usize>) -> Self {
        let [n0, n1] = a.dims();
        let at = |i: usize, j: usize| {
            let (i, j) = if transposed { (j, i) } else { (i, j) };
            if i < n0 && j < n1 {
                a.coeff(i, j)
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let coeffs = t_degrees
            .iter()
            .enumerate()
            .map(|(i, &m)| (0..=m).map(|j| at(i, j)).collect())
            .collect();
        Bivariate { coeffs, t_degrees }
    }

    /// The same section in the far chart, `w = 1/t`: each `a_i` is
    /// reversed at its formal degree.
    pub fn reversed(&self) -> Bivariate {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.iter().rev().copied().collect())
            .collect();
        Bivariate {
            coeffs,
            t_degrees: self.t_degrees.clone(),
        }
    }

    /// Degree of the discriminant in `s` as a binary form in `t`.
    pub fn discriminant_degree(&self) -> usize {
        let n = self.degree_s();
        // Weighted homogeneity: either every a_i has the same degree m
        // (degree (2n - 2) m), or a_i has degree n - i (degree n (n - 1)).
        if self.t_degrees.windows(2).all(|w| w[0] == w[1]) {
            (2 * n).saturating_sub(2) * self.t_degrees[0]
        } else {
            n * n.saturating_sub(1)
        }
    }

    /// Degree in `s`.
    pub fn degree_s(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients `a_i(t)` and `a_i'(t)`.
    pub fn at_t(&self, t: Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
        self.coeffs.iter().map(|c| horner_with_derivative(c, t)).unzip()
    }

    /// `g`, `g_s`, `g_t`, `g_ss`, `g_st` at `s` given the output of [`Self::at_t`].
    pub fn jet(a: &[Complex64], da: &[Complex64], s: Complex64) -> Jet {
        let zero = Complex64::new(0.0, 0.0);
        let (mut g, mut gs, mut gss) = (zero, zero, zero);
        let (mut gt, mut gst) = (zero, zero);
        for i in (0..a.len()).rev() {
            gss = gss * s + gs * 2.0;
            gs = gs * s + g;
            g = g * s + a[i];
            gst = gst * s + gt;
            gt = gt * s + da[i];
        }
        Jet { g, gs, gt, gss, gst }
    }

    pub fn eval_jet(&self, s: Complex64, t: Complex64) -> Jet {
        let (a, da) = self.at_t(t);
        Self::jet(&a, &da, s)
    }

    /// Coefficients of `g_s(., t)` in `s`.
    pub fn derivative_s_at(a: &[Complex64]) -> Vec<Complex64> {
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as f64)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{sample_section, EnsembleSpec, Field};

    #[test]
    fn bivariate_matches_homogeneous_evaluation() {
        for space in [Space::Cp2, Space::Cp1xCp1] {
            let pencil = PencilModel::for_space(space).unwrap();
            let map = ChartMap::new(pencil);
            let f = sample_section(&EnsembleSpec::new(space, 4, Field::Complex, 1), 0);
            let g = map.bivariate(&f).unwrap();
            let (s, t) = (Complex64::new(0.3, -0.2), Complex64::new(-0.7, 0.4));
            let v = map.point(s, t);
            let want = f.evaluate(&v).unwrap();
            let jet = g.eval_jet(s, t);
            assert!((jet.g - want.value).norm() < 1e-12 * want.magnitude, "{space}");
            let (cs, ct) = map.coordinates(&v).unwrap();
            assert!((cs - s).norm() < 1e-14 && (ct - t).norm() < 1e-14);
            // Directional derivatives through the tangents.
            let (ts, tt) = map.tangents();
            let grad: Vec<Complex64> = (0..space.num_vars())
                .map(|i| f.partial_derivative(i).unwrap().evaluate(&v).unwrap().value)
                .collect();
            let ds: Complex64 = grad.iter().zip(&ts).map(|(g, &x)| g * x).sum();
            let dt: Complex64 = grad.iter().zip(&tt).map(|(g, &x)| g * x).sum();
            assert!((jet.gs - ds).norm() < 1e-11 * want.magnitude.max(1.0));
            assert!((jet.gt - dt).norm() < 1e-11 * want.magnitude.max(1.0));
        }
    }
}
