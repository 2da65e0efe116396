use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::poly::UNIT_ROUNDOFF;

/// One Newton step at a root approximation: the correction `p/p'` and
/// whether the value is already at the rounding-noise level.
#[derive(Clone, Copy, Debug)]
pub struct NewtonStep {
    pub correction: Complex64,
    pub converged: bool,
}

/// Simultaneous Aberth–Ehrlich iteration for the `z.len()` roots of a
/// function with that many zeros. `step(k, z)` returns the Newton correction
/// at `z` for approximation `k`, or `None` when it is undefined there.
/// Returns whether every approximation converged within `max_iter` sweeps.
pub fn aberth<F>(z: &mut [Complex64], mut step: F, max_iter: usize) -> bool
where
    F: FnMut(usize, Complex64) -> Option<NewtonStep>,
{
    let n = z.len();
    let mut done = vec![false; n];
    for sweep in 0..max_iter {
        let mut all = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let Some(s) = step(k, z[k]) else {
                // Nudge off a critical point of the iteration.
                let nudge = Complex64::from_polar(1e-8 * z[k].norm().max(1.0), 0.3 + sweep as f64);
                z[k] += nudge;
                all = false;
                continue;
            };
            if s.converged {
                done[k] = true;
                continue;
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for (i, zi) in z.iter().enumerate() {
                if i != k {
                    let diff = z[k] - zi;
                    if diff.norm_sqr() > 0.0 {
                        sum += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - s.correction * sum;
            let delta = if denom.norm() > 0.0 { s.correction / denom } else { s.correction };
            z[k] -= delta;
            if !z[k].re.is_finite() || !z[k].im.is_finite() {
                z[k] = Complex64::from_polar(1.0, k as f64 + sweep as f64);
            }
            if delta.norm() <= 2.0 * UNIT_ROUNDOFF * z[k].norm() {
                done[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            return true;
        }
    }
    done.iter().all(|&d| d)
}

/// Horner evaluation of `p` and `p'` at `z` together with the running bound
/// `sum |c_i| |z|^i`.
fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let az = z.norm();
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for &ci in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ci;
        mag = mag * az + ci.norm();
    }
    (p, dp, mag)
}

/// Newton correction `p(z)/p'(z)` for a polynomial with coefficients `c`
/// (constant term first), evaluated in reversed form outside the unit disk.
pub fn polynomial_newton(c: &[Complex64], z: Complex64) -> Option<NewtonStep> {
    let n = c.len() - 1;
    let gamma = 1.01 * (4 * n + 2) as f64 * UNIT_ROUNDOFF;
    if z.norm() <= 1.0 {
        let (p, dp, mag) = horner(c, z);
        if dp.norm() == 0.0 {
            return None;
        }
        Some(NewtonStep {
            correction: p / dp,
            converged: p.norm() <= gamma * mag,
        })
    } else {
        let w = z.inv();
        let rev: Vec<Complex64> = c.iter().rev().copied().collect();
        let (q, dq, mag) = horner(&rev, w);
        let denom = q * n as f64 - w * dq;
        if denom.norm() == 0.0 {
            return None;
        }
        Some(NewtonStep {
            correction: z * q / denom,
            converged: q.norm() <= gamma * mag,
        })
    }
}

/// Starting points on circles read off the Newton polygon of `|c_i|`.
pub fn initial_approximations(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, ci)| ci.norm() > 0.0)
        .map(|(i, ci)| (i, ci.norm().ln()))
        .collect();
    // Upper convex hull, left to right.
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut z = Vec::with_capacity(n);
    for (e, win) in hull.windows(2).enumerate() {
        let ((i, li), (j, lj)) = (win[0], win[1]);
        let m = j - i;
        let r = ((li - lj) / m as f64).exp();
        let offset = 0.4 + TAU * e as f64 / n as f64;
        for k in 0..m {
            z.push(Complex64::from_polar(r, TAU * k as f64 / m as f64 + offset));
        }
    }
    z
}

/// All roots of the polynomial with coefficients `c` (constant term first,
/// nonzero leading coefficient). Zero roots are split off exactly.
/// Returns the approximations and whether the iteration converged.
pub fn aberth_roots(c: &[Complex64]) -> (Vec<Complex64>, bool) {
    let zeros = c.iter().take_while(|ci| ci.norm() == 0.0).count();
    let c = &c[zeros..];
    let n = c.len() - 1;
    let mut z = initial_approximations(c);
    debug_assert_eq!(z.len(), n);
    let ok = n == 0 || aberth(&mut z, |_, x| polynomial_newton(c, x), 500);
    z.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
    (z, ok)
}
