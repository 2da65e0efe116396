//! Critical points of a fixed pencil restricted to a random curve.

mod certify;
mod pencil;
mod resultant;
mod solver;

pub use certify::{krawczyk_real, KrawczykOutcome};
pub use pencil::{Bivariate, Chart, ChartMap, Jet, PencilModel};
pub use resultant::{resultant_exact, resultant_numeric, solve_via_resultant, sylvester_determinant};
pub use solver::{back_substitute, chart_solutions, discriminant_roots, polish, ChartSolution};

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::f64_to_rational;
use crate::poly::{HomogeneousPolynomial, Space};
use crate::uniroots::{IntPoly, SturmSequence};

/// Backward-error threshold for accepting a critical point.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Critical points closer than this (FS distance) signal a multiple root.
pub const SEPARATION_TOLERANCE: f64 = 1e-6;
/// Floor of the reality threshold on the distance to the conjugate point.
pub const REAL_FLOOR: f64 = 1e-7;
/// Degrees up to which real classification is cross-checked against the
/// exact resultant.
pub const EXACT_CHECK_MAX_DEGREE: u32 = 6;

/// One critical point.
///
/// `coords` are homogeneous coordinates with each projective factor scaled
/// to unit length. `fiber` is the pencil value (`y/z` on `CP2`, `x1/x0` on
/// `CP1 x CP1`); `coordinate` is the position along the fiber (`x/z`,
/// respectively `y1/y0`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub coords: Vec<Complex64>,
    pub fiber: Complex64,
    pub coordinate: Complex64,
    pub residual: f64,
    pub is_real: bool,
    pub dist_to_conjugate: f64,
}

/// The critical set `R_sigma` of one section.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointSet {
    pub space: Space,
    pub points: Vec<CriticalPoint>,
    /// Whether reality flags have been assigned by [`classify_real`].
    pub classified: bool,
    /// Set when some point could not be classified with certainty; such
    /// trials are left out of real-count statistics.
    pub ambiguous: bool,
    pub notes: Vec<String>,
    pub min_separation: f64,
    pub max_residual: f64,
}

impl CriticalPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn real_count(&self) -> usize {
        self.points.iter().filter(|p| p.is_real).count()
    }
}

/// The pair `(f, fiber derivative of f)` whose common zeros are the critical
/// points: `(f, df/dx)` on `CP2`; `(f, y0 df/dy1 - y1 df/dy0)` on
/// `CP1 x CP1`, which is the derivative along the second factor in every
/// chart at once.
pub fn critical_system(
    f: &HomogeneousPolynomial,
    pencil: PencilModel,
) -> Result<(HomogeneousPolynomial, HomogeneousPolynomial)> {
    check_space(f, pencil)?;
    let second = match pencil {
        PencilModel::ProjectionFromPoint => f.partial_derivative(0)?,
        PencilModel::FirstFactor => {
            let a = f.partial_derivative(3)?.mul_var(2)?;
            let b = f.partial_derivative(2)?.mul_var(3)?;
            a.add(&b.scale(Complex64::new(-1.0, 0.0)))?
        }
    };
    Ok((f.clone(), second))
}

fn check_space(f: &HomogeneousPolynomial, pencil: PencilModel) -> Result<()> {
    if f.space() != pencil.space() {
        return Err(Error::Mismatch(format!(
            "section on {} with a pencil on {}",
            f.space(),
            pencil.space()
        )));
    }
    if f.is_zero() {
        return Err(Error::InvalidArgument("zero section".into()));
    }
    Ok(())
}

/// Scales each projective factor of `v` to unit length.
pub fn normalize(space: Space, v: &[Complex64]) -> Vec<Complex64> {
    let unit = |w: &[Complex64]| {
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        w.iter().map(|z| z / n).collect::<Vec<_>>()
    };
    match space {
        Space::Cp1xCp1 => {
            let mut a = unit(&v[..2]);
            a.extend(unit(&v[2..]));
            a
        }
        _ => unit(v),
    }
}

/// FS distance `atan2(|u ^ v|, |<u, v>|)` between unit vectors, stable for
/// nearby points.
fn fs_distance_unit(u: &[Complex64], v: &[Complex64]) -> f64 {
    let inner: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let mut wedge = 0.0;
    for i in 0..u.len() {
        for j in (i + 1)..u.len() {
            wedge += (u[i] * v[j] - u[j] * v[i]).norm_sqr();
        }
    }
    wedge.sqrt().atan2(inner.norm())
}

/// Fubini–Study distance between two points given by unit-normalized
/// coordinates; the product metric on `CP1 x CP1`.
pub fn fs_distance(space: Space, u: &[Complex64], v: &[Complex64]) -> f64 {
    match space {
        Space::Cp1xCp1 => {
            let a = fs_distance_unit(&u[..2], &v[..2]);
            let b = fs_distance_unit(&u[2..], &v[2..]);
            a.hypot(b)
        }
        _ => fs_distance_unit(u, v),
    }
}

/// Distance from a point to its image under coordinate conjugation.
pub fn distance_to_conjugate(space: Space, v: &[Complex64]) -> f64 {
    let v = normalize(space, v);
    let c: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
    fs_distance(space, &v, &c)
}

fn fiber_and_coordinate(space: Space, v: &[Complex64]) -> (Complex64, Complex64) {
    match space {
        Space::Cp1xCp1 => (v[1] / v[0], v[3] / v[2]),
        _ => (v[1] / v[2], v[0] / v[2]),
    }
}

/// Computes `R_sigma` for the pencil, certifying each point by residual and
/// separation. Any failure is a [`Error::DegenerateInstance`]: the caller
/// resamples.
pub fn solve_critical_points(f: &HomogeneousPolynomial, pencil: PencilModel) -> Result<CriticalPointSet> {
    let (f1, f2) = critical_system(f, pencil)?;
    let space = f.space();
    if pencil == PencilModel::ProjectionFromPoint {
        let base = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        if f.evaluate(&base)?.value.norm() <= 1e-12 * f.max_abs_coeff() {
            return Err(Error::degenerate("curve passes through the base point [1:0:0]"));
        }
    }
    let count = pencil.expected_count(f.degree());
    let mut set = CriticalPointSet {
        space,
        points: Vec::with_capacity(count),
        classified: false,
        ambiguous: false,
        notes: Vec::new(),
        min_separation: f64::INFINITY,
        max_residual: 0.0,
    };
    if count == 0 {
        return Ok(set);
    }
    let map = ChartMap::new(pencil);
    let g = map.bivariate(f)?;
    if g.coeffs[g.degree_s()].iter().all(|c| c.norm() == 0.0) {
        return Err(Error::degenerate("fiber degree drops identically"));
    }
    let sols = chart_solutions(&g, count)
        .ok_or_else(|| Error::degenerate("back-substitution failed"))?;
    for sol in sols {
        let v = normalize(space, &map.point_in(sol.chart, sol.s, sol.t));
        let e1 = f1.evaluate(&v)?.backward_error();
        let e2 = f2.evaluate(&v)?.backward_error();
        let residual = e1.max(e2);
        if !(residual < RESIDUAL_TOLERANCE) {
            return Err(Error::degenerate(format!(
                "critical point residual {residual:.3e} at t = {}",
                sol.t
            )));
        }
        let (fiber, coordinate) = fiber_and_coordinate(space, &v);
        set.max_residual = set.max_residual.max(residual);
        set.points.push(CriticalPoint {
            dist_to_conjugate: distance_to_conjugate(space, &v),
            coords: v,
            fiber,
            coordinate,
            residual,
            is_real: false,
        });
    }
    for i in 0..set.points.len() {
        for j in (i + 1)..set.points.len() {
            let d = fs_distance(space, &set.points[i].coords, &set.points[j].coords);
            set.min_separation = set.min_separation.min(d);
        }
    }
    if set.min_separation < SEPARATION_TOLERANCE {
        return Err(Error::degenerate(format!(
            "critical points {:.3e} apart: near-multiple discriminant root",
            set.min_separation
        )));
    }
    Ok(set)
}

/// Assigns reality flags for a real section. A point is real when its
/// distance to the conjugate point is below `max(1e-7, 10 residual)`; each
/// real point is then certified by a Krawczyk test on a real box of the
/// chart, and each non-real point must have a conjugate partner in the set.
/// Points that fall between the thresholds, or fail certification, make the
/// set ambiguous.
pub fn classify_real(points: &CriticalPointSet, f: &HomogeneousPolynomial) -> Result<CriticalPointSet> {
    if !f.is_real() {
        return Err(Error::InvalidArgument("classify_real needs a real section".into()));
    }
    let pencil = PencilModel::for_space(f.space())?;
    let (f1, f2) = critical_system(f, pencil)?;
    let map = ChartMap::new(pencil);
    let mut out = points.clone();
    out.classified = true;
    let space = f.space();
    for k in 0..out.points.len() {
        let p = &out.points[k];
        let eps = REAL_FLOOR.max(10.0 * p.residual);
        let d = p.dist_to_conjugate;
        if d < eps {
            let certified = map
                .locate(&p.coords)
                .map(|(chart, s, t)| krawczyk_real(&f1, &f2, &map, chart, s.re, t.re))
                .is_some_and(|o| o.is_certified());
            if !certified {
                out.ambiguous = true;
                out.notes.push(format!("point {k}: real box not certified"));
            }
            out.points[k].is_real = true;
        } else if d < 10.0 * eps {
            out.ambiguous = true;
            out.notes.push(format!("point {k}: distance to conjugate {d:.3e} near threshold"));
        } else {
            let conj: Vec<Complex64> = p.coords.iter().map(|z| z.conj()).collect();
            let partner = out
                .points
                .iter()
                .enumerate()
                .any(|(j, q)| j != k && fs_distance(space, &q.coords, &conj) < SEPARATION_TOLERANCE);
            if !partner {
                out.ambiguous = true;
                out.notes.push(format!("point {k}: no conjugate partner"));
            }
        }
    }
    if (out.len() - out.real_count()) % 2 != 0 {
        out.ambiguous = true;
        out.notes.push("odd number of non-real points".into());
    }
    if space == Space::Cp2 && f.d() <= EXACT_CHECK_MAX_DEGREE && !out.ambiguous {
        exact_real_check(&mut out, f)?;
    }
    Ok(out)
}

/// Checks the real points against the exact resultant
/// `R(y) = Res_x(f, f_x)(y, 1)`: its Sturm count of real roots must equal
/// the number of real points, and `R` must change sign across a small
/// bracket around each real fiber value. Disjoint brackets with a sign
/// change each hold a root, so together they account for all of them.
fn exact_real_check(set: &mut CriticalPointSet, f: &HomogeneousPolynomial) -> Result<()> {
    let r = resultant_exact(&f.to_exact())?;
    let p = IntPoly::from_rationals(&r)?;
    let total = SturmSequence::new(&p).count_line();
    let mut brackets: Vec<(f64, f64)> = set
        .points
        .iter()
        .filter(|q| q.is_real)
        .map(|q| {
            let y = q.fiber.re;
            let h = 1e-6 * y.abs().max(1.0);
            (y - h, y + h)
        })
        .collect();
    brackets.sort_by(|a, b| a.0.total_cmp(&b.0));
    let disjoint = brackets.windows(2).all(|w| w[0].1 < w[1].0);
    let changes = brackets
        .iter()
        .all(|&(lo, hi)| p.sign_at(&f64_to_rational(lo)) * p.sign_at(&f64_to_rational(hi)) < 0);
    if total != brackets.len() || !disjoint || !changes {
        set.ambiguous = true;
        set.notes.push(format!(
            "exact resultant has {total} real roots, {} real points found",
            brackets.len()
        ));
    }
    Ok(())
}

/// Header of the per-point CSV rows.
pub const CSV_HEADER: &str =
    "trial_index,point_index,fiber_re,fiber_im,x_re,x_im,residual,is_real,dist_to_conjugate";

/// Appends one CSV row per point.
pub fn write_csv_rows<W: Write>(out: &mut W, trial: u64, set: &CriticalPointSet) -> std::io::Result<()> {
    for (i, p) in set.points.iter().enumerate() {
        writeln!(
            out,
            "{trial},{i},{:e},{:e},{:e},{:e},{:e},{},{:e}",
            p.fiber.re,
            p.fiber.im,
            p.coordinate.re,
            p.coordinate.im,
            p.residual,
            p.is_real,
            p.dist_to_conjugate
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Degree;

    #[test]
    fn fermat_system() {
        let d = 4;
        let f = HomogeneousPolynomial::from_real_terms(
            Space::Cp2,
            Degree::Total(d),
            &[(&[4, 0, 0], 1.0), (&[0, 4, 0], 1.0), (&[0, 0, 4], 1.0)],
        )
        .unwrap();
        let (a, b) = critical_system(&f, PencilModel::ProjectionFromPoint).unwrap();
        assert_eq!(a, f);
        let want = HomogeneousPolynomial::from_real_terms(Space::Cp2, Degree::Total(3), &[(&[3, 0, 0], 4.0)]).unwrap();
        assert_eq!(b, want);
    }

    #[test]
    fn conjugate_distances() {
        let c = |re, im| Complex64::new(re, im);
        assert!(distance_to_conjugate(Space::Cp2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]) < 1e-15);
        let d = distance_to_conjugate(Space::Cp2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
        assert!((d - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let v = [c(0.3, 0.1), c(-0.2, 0.5), c(1.0, -0.4)];
        let w: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
        assert!((distance_to_conjugate(Space::Cp2, &v) - distance_to_conjugate(Space::Cp2, &w)).abs() < 1e-15);
        // A real point written with a complex phase is still real.
        let phase = Complex64::from_polar(1.0, 0.7);
        let r = [c(0.3, 0.0) * phase, c(-0.2, 0.0) * phase, c(1.0, 0.0) * phase];
        assert!(distance_to_conjugate(Space::Cp2, &r) < 1e-15);
    }

    #[test]
    fn circle_has_two_real_critical_points() {
        // x^2 + y^2 - z^2 with f_x = 2x: points [0 : +-1 : 1].
        let f = HomogeneousPolynomial::from_real_terms(
            Space::Cp2,
            Degree::Total(2),
            &[(&[2, 0, 0], 1.0), (&[0, 2, 0], 1.0), (&[0, 0, 2], -1.0)],
        )
        .unwrap();
        let set = solve_critical_points(&f, PencilModel::ProjectionFromPoint).unwrap();
        assert_eq!(set.len(), 2);
        let set = classify_real(&set, &f).unwrap();
        assert!(!set.ambiguous, "{:?}", set.notes);
        assert_eq!(set.real_count(), 2);
        let mut fibers: Vec<f64> = set.points.iter().map(|p| p.fiber.re).collect();
        fibers.sort_by(f64::total_cmp);
        assert!((fibers[0] + 1.0).abs() < 1e-12 && (fibers[1] - 1.0).abs() < 1e-12);
        for p in &set.points {
            assert!(p.coordinate.norm() < 1e-12);
        }
    }

    #[test]
    fn base_point_is_rejected() {
        let f = HomogeneousPolynomial::from_real_terms(
            Space::Cp2,
            Degree::Total(2),
            &[(&[1, 1, 0], 1.0), (&[0, 0, 2], 1.0)],
        )
        .unwrap();
        let err = solve_critical_points(&f, PencilModel::ProjectionFromPoint).unwrap_err();
        assert!(err.is_degenerate());
    }
}
