//! Critical points of the pencil restricted to `{g = 0}` in the chart
//! `(s, t)`: the `t` with a double root in `s`.
//!
//! The discriminant `D(t) = Disc_s g(., t)` is, up to a constant,
//! `a_n(t)^(n-2) prod_i g_s(s_i(t), t)` over the roots `s_i(t)` of
//! `g(., t)`. Its logarithmic derivative
//! `(n-2) a_n'/a_n + sum_i (g_st g_s - g_ss g_t) / g_s^2`
//! needs only those roots, so Aberth iteration runs on `D` without ever
//! expanding its coefficients. For `|t| > 1` the same quantity is taken
//! from the far chart `w = 1/t`, using `D(t) = t^M D'(1/t)`.

use num_complex::Complex64;

use super::pencil::{Bivariate, Chart, Jet};
use crate::poly::UNIT_ROUNDOFF;
use crate::uniroots::{aberth, aberth_roots, polynomial_newton, NewtonStep};

/// A chart solution `(s, t)` before certification.
#[derive(Clone, Copy, Debug)]
pub struct ChartSolution {
    pub chart: Chart,
    pub s: Complex64,
    pub t: Complex64,
    /// Distance between the double root of `g(., t)` and the nearest root
    /// of `g_s(., t)` before polishing.
    pub match_distance: f64,
}

fn fiber_roots(a: &[Complex64], warm: &mut Vec<Complex64>) -> bool {
    let n = a.len() - 1;
    if warm.len() != n {
        let (z, ok) = aberth_roots(a);
        *warm = z;
        return ok;
    }
    if aberth(warm, |_, x| polynomial_newton(a, x), 60) {
        return true;
    }
    let (z, ok) = aberth_roots(a);
    *warm = z;
    ok
}

/// Logarithmic derivative of the discriminant of `g` at `t`, refreshing
/// the warm-started fiber roots stored in `warm`.
fn log_discriminant(g: &Bivariate, t: Complex64, warm: &mut Vec<Complex64>) -> Option<Complex64> {
    let (a, da) = g.at_t(t);
    let n = a.len() - 1;
    if a[n].norm() == 0.0 {
        return None;
    }
    fiber_roots(&a, warm);
    let mut log_d = da[n] / a[n] * (n as f64 - 2.0);
    for &s in warm.iter() {
        let Jet { gs, gt, gss, gst, .. } = Bivariate::jet(&a, &da, s);
        if gs.norm() == 0.0 {
            return None;
        }
        log_d += (gst * gs - gss * gt) / (gs * gs);
    }
    (log_d.re.is_finite() && log_d.im.is_finite()).then_some(log_d)
}

/// Both charts of the section with separate warm starts.
struct Charts<'a> {
    near: &'a Bivariate,
    far: &'a Bivariate,
    degree: f64,
}

impl Charts<'_> {
    fn step(&self, t: Complex64, warm: &mut (Vec<Complex64>, Vec<Complex64>)) -> Option<NewtonStep> {
        let log_d = if t.norm() <= 1.0 {
            log_discriminant(self.near, t, &mut warm.0)?
        } else {
            let w = t.inv();
            let lw = log_discriminant(self.far, w, &mut warm.1)?;
            (self.degree - lw * w) * w
        };
        if log_d.norm() == 0.0 {
            return None;
        }
        let correction = log_d.inv();
        Some(NewtonStep {
            correction,
            converged: correction.norm() <= 1e-13 * t.norm().max(1.0),
        })
    }
}

/// Approximate roots of the discriminant, `count` of them.
pub fn discriminant_roots(g: &Bivariate, count: usize, max_sweeps: usize) -> (Vec<Complex64>, bool) {
    let far = g.reversed();
    let charts = Charts {
        near: g,
        far: &far,
        degree: g.discriminant_degree() as f64,
    };
    let mut t: Vec<Complex64> = (0..count)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * (k as f64 + 0.25) / count as f64 + 0.1))
        .collect();
    let mut warm = vec![(Vec::new(), Vec::new()); count];
    let ok = aberth(&mut t, |k, x| charts.step(x, &mut warm[k]), max_sweeps);
    (t, ok)
}

/// Back-substitution at a discriminant root: the double root of `g(., t)`
/// matched against the roots of `g_s(., t)`. `g` is the section in `chart`.
pub fn back_substitute(g: &Bivariate, chart: Chart, t: Complex64) -> Option<ChartSolution> {
    let (a, _) = g.at_t(t);
    let n = a.len() - 1;
    if n < 2 {
        return None;
    }
    let (roots, _) = aberth_roots(&a);
    let mut best = (f64::INFINITY, 0, 0);
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let dist = (roots[i] - roots[j]).norm();
            if dist < best.0 {
                best = (dist, i, j);
            }
        }
    }
    let mid = (roots[best.1] + roots[best.2]) / 2.0;
    let ds = Bivariate::derivative_s_at(&a);
    let (droots, _) = aberth_roots(&ds);
    let s = droots
        .iter()
        .copied()
        .min_by(|x, y| (x - mid).norm().total_cmp(&(y - mid).norm()))?;
    Some(ChartSolution {
        chart,
        s,
        t,
        match_distance: (s - mid).norm(),
    })
}

/// Newton iteration on `(g, g_s) = 0` in `(s, t)`.
pub fn polish(g: &Bivariate, mut s: Complex64, mut t: Complex64) -> (Complex64, Complex64) {
    for _ in 0..40 {
        let j = g.eval_jet(s, t);
        // [gs gt; gss gst] [ds; dt] = -[g; gs]
        let det = j.gs * j.gst - j.gt * j.gss;
        if det.norm() == 0.0 {
            break;
        }
        let ds = -(j.g * j.gst - j.gt * j.gs) / det;
        let dt = -(j.gs * j.gs - j.gss * j.g) / det;
        if !ds.re.is_finite() || !dt.re.is_finite() || !ds.im.is_finite() || !dt.im.is_finite() {
            break;
        }
        s += ds;
        t += dt;
        let scale = 4.0 * UNIT_ROUNDOFF;
        if ds.norm() <= scale * s.norm().max(1.0) && dt.norm() <= scale * t.norm().max(1.0) {
            break;
        }
    }
    (s, t)
}

/// Every chart solution of `g = g_s = 0`, `count` of them, before
/// certification. Solutions with `|t| > 1` are returned in the far chart.
pub fn chart_solutions(g: &Bivariate, count: usize) -> Option<Vec<ChartSolution>> {
    let (ts, _) = discriminant_roots(g, count, 400);
    let far = g.reversed();
    ts.into_iter()
        .map(|t| {
            let (h, chart, t) = if t.norm() <= 1.0 {
                (g, Chart::Near, t)
            } else {
                (&far, Chart::Far, t.inv())
            };
            let sol = back_substitute(h, chart, t)?;
            let (s, t) = polish(h, sol.s, sol.t);
            Some(ChartSolution { s, t, ..sol })
        })
        .collect()
}
