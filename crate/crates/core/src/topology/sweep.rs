//! Component count by sweeping the pencil of lines through `[1:0:0]`.
//!
//! The fibers `[x : sin a : cos a]`, `a` in `[0, pi)`, cover `RP2` minus
//! the base point. Between consecutive real critical values the real points
//! of a fiber move as `n` disjoint arcs ordered by `x`; at a real critical
//! point two neighbouring arcs are born or die together. After half a turn
//! the fiber comes back with `x` negated, which reverses the order. Arcs
//! joined by these rules are the components. Everything is decided by
//! exact Sturm counts, given the certified real critical points.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::critpoints::CriticalPointSet;
use crate::error::{Error, Result};
use crate::exact::f64_to_rational;
use crate::poly::{HomogeneousPolynomial, Space};
use crate::uniroots::{IntPoly, SturmSequence};

/// Coefficients of `f(x, sin a, cos a)` in `x`, constant term first.
pub fn fiber_polynomial(f: &HomogeneousPolynomial, angle: f64) -> Vec<f64> {
    let d = f.d() as usize;
    let (s, c) = angle.sin_cos();
    let mut out = vec![0.0; d + 1];
    for (alpha, coeff) in f.terms() {
        let e = alpha.exponents();
        out[e[0] as usize] += coeff.re * s.powi(e[1] as i32) * c.powi(e[2] as i32);
    }
    out
}

/// Angle in `[0, pi)` of the fiber through a real point and the point's
/// position `x` along it.
fn fiber_position(coords: &[Complex64]) -> (f64, f64) {
    // Strip the common phase so the coordinates are real.
    let big = coords
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = big.conj() / big.norm();
    let [x, y, z] = [0, 1, 2].map(|i| (coords[i] * phase).re);
    let mut a = y.atan2(z);
    if a < 0.0 {
        a += PI;
    }
    if a >= PI {
        a -= PI;
    }
    let (s, c) = a.sin_cos();
    (a, x / (y * s + z * c))
}

fn fiber_sturm(f: &HomogeneousPolynomial, angle: f64) -> Result<SturmSequence> {
    Ok(SturmSequence::new(&IntPoly::from_f64(&fiber_polynomial(f, angle))?))
}

/// Position of the fold at `x` among the other real roots of the fiber at
/// its own angle, or `None` if the roots near `x` are not a clean pair.
fn fold_position(seq: &SturmSequence, coeffs: &[f64], x: f64, others: usize) -> Option<usize> {
    let lead = coeffs.iter().rev().find(|&&c| c != 0.0)?.abs();
    let bound = 2.0 * (1.0 + coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max) / lead) + 2.0 * x.abs();
    let delta = 1e-6 * x.abs().max(1.0);
    let (lo, hi) = (f64_to_rational(-bound), f64_to_rational(bound));
    let left = seq.count_interval(&lo, &f64_to_rational(x - delta));
    let right = seq.count_interval(&f64_to_rational(x + delta), &hi);
    (left + right == others).then_some(left)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Components of the real locus from the certified real critical points of
/// the pencil. `Ok(None)` when the configuration is not generic enough to
/// decide (two critical points on one fiber, or a non-fold transition).
pub fn components_by_sweep(f: &HomogeneousPolynomial, set: &CriticalPointSet) -> Result<Option<usize>> {
    if f.space() != Space::Cp2 || !f.is_real() {
        return Err(Error::InvalidArgument("the sweep needs a real plane curve".into()));
    }
    if !set.classified || set.ambiguous {
        return Err(Error::InvalidArgument("the sweep needs certified real critical points".into()));
    }
    let mut crit: Vec<(f64, f64)> = set
        .points
        .iter()
        .filter(|p| p.is_real)
        .map(|p| fiber_position(&p.coords))
        .collect();
    crit.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = crit.len();
    if m == 0 {
        let n = fiber_sturm(f, 0.3)?.count_line();
        return Ok(Some(n.div_ceil(2)));
    }
    let gap = |j: usize| -> (f64, f64) {
        let next = if j + 1 < m { crit[j + 1].0 } else { crit[0].0 + PI };
        (crit[j].0, next)
    };
    if (0..m).any(|j| {
        let (a, b) = gap(j);
        b - a < 1e-9
    }) {
        return Ok(None);
    }
    // Gap j runs from critical value j to j + 1; the last one wraps.
    let mut counts = Vec::with_capacity(m);
    for j in 0..m {
        let (a, b) = gap(j);
        counts.push(fiber_sturm(f, 0.5 * (a + b))?.count_line());
    }
    let mut offset = vec![0; m + 1];
    for j in 0..m {
        offset[j + 1] = offset[j] + counts[j];
    }
    let mut uf = UnionFind((0..offset[m]).collect());
    for j in 0..m {
        let (left, flip) = if j == 0 { (m - 1, true) } else { (j - 1, false) };
        let right = j;
        let (nl, nr) = (counts[left], counts[right]);
        // Left arcs in the order seen at this critical value.
        let left_node = |q: usize| offset[left] + if flip { nl - 1 - q } else { q };
        let right_node = |q: usize| offset[right] + q;
        let (angle, x) = crit[j];
        let coeffs = fiber_polynomial(f, angle);
        let seq = SturmSequence::new(&IntPoly::from_f64(&coeffs)?);
        if nr == nl + 2 {
            let Some(k) = fold_position(&seq, &coeffs, x, nl) else {
                return Ok(None);
            };
            uf.union(right_node(k), right_node(k + 1));
            for q in 0..nl {
                uf.union(left_node(q), right_node(if q < k { q } else { q + 2 }));
            }
        } else if nl == nr + 2 {
            let Some(k) = fold_position(&seq, &coeffs, x, nr) else {
                return Ok(None);
            };
            uf.union(left_node(k), left_node(k + 1));
            for q in 0..nr {
                uf.union(left_node(if q < k { q } else { q + 2 }), right_node(q));
            }
        } else {
            return Ok(None);
        }
    }
    let mut roots: Vec<usize> = (0..offset[m]).map(|i| uf.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(Some(roots.len()))
}
