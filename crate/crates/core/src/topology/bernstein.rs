//! Tensor Bernstein patches with interval coefficients.
//!
//! A polynomial of degree at most `n` in each of `u`, `v` over a box is
//! written as `sum b_ij B_i(s) B_j(t)` with `s, t` the box's unit
//! coordinates. The coefficient hull bounds the range, differences of
//! neighbouring coefficients bound the partials, and the boundary rows are
//! the patches of the four edges.

use crate::interval::Interval;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// Encloses the real number `x`, which may have been rounded.
fn rounded(x: f64) -> Interval {
    Interval::new(x.next_down(), x.next_up())
}

#[derive(Clone, Debug)]
pub struct BernsteinPatch {
    n: usize,
    /// `b[i * (n + 1) + j]`: `i` indexes `u`, `j` indexes `v`.
    b: Vec<Interval>,
}

impl BernsteinPatch {
    /// Patch of `sum a[i][j] u^i v^j` over `[-1, 1]^2`. `a` is row-major with
    /// `n + 1` columns.
    pub fn on_unit_square(a: &[f64], n: usize) -> Self {
        let m = n + 1;
        debug_assert_eq!(a.len(), m * m);
        // Substitute u = 2s - 1, v = 2t - 1; then change to Bernstein basis.
        // Both steps are separable, one axis at a time.
        let shift: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|k| {
                        if k > i {
                            0.0
                        } else {
                            let sign = if (i - k) % 2 == 0 { 1.0 } else { -1.0 };
                            sign * binomial(i, k) * 2f64.powi(k as i32)
                        }
                    })
                    .collect()
            })
            .collect();
        let basis: Vec<Vec<Interval>> = (0..m)
            .map(|p| {
                (0..m)
                    .map(|k| {
                        if k > p {
                            Interval::point(0.0)
                        } else {
                            rounded(binomial(p, k) / binomial(n, k))
                        }
                    })
                    .collect()
            })
            .collect();
        let mut c: Vec<Interval> = a.iter().map(|&x| Interval::point(x)).collect();
        for axis in 0..2 {
            let mut next = vec![Interval::point(0.0); m * m];
            for outer in 0..m {
                for k in 0..m {
                    let mut acc = Interval::point(0.0);
                    for i in k..m {
                        let idx = if axis == 0 { i * m + outer } else { outer * m + i };
                        acc = acc + c[idx].scale(shift[i][k]);
                    }
                    let idx = if axis == 0 { k * m + outer } else { outer * m + k };
                    next[idx] = acc;
                }
            }
            c = next;
        }
        for axis in 0..2 {
            let mut next = vec![Interval::point(0.0); m * m];
            for outer in 0..m {
                for p in 0..m {
                    let mut acc = Interval::point(0.0);
                    for k in 0..=p {
                        let idx = if axis == 0 { k * m + outer } else { outer * m + k };
                        acc = acc + c[idx] * basis[p][k];
                    }
                    let idx = if axis == 0 { p * m + outer } else { outer * m + p };
                    next[idx] = acc;
                }
            }
            c = next;
        }
        BernsteinPatch { n, b: c }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, i: usize, j: usize) -> Interval {
        self.b[i * (self.n + 1) + j]
    }

    /// Enclosure of the range over the box.
    pub fn range(&self) -> Interval {
        hull(self.b.iter().copied())
    }

    /// Enclosure of the range of `du` (`axis` 0) or `dv` (`axis` 1), up to
    /// the positive factor `n / width`.
    pub fn partial_range(&self, axis: usize) -> Interval {
        let m = self.n + 1;
        if self.n == 0 {
            return Interval::point(0.0);
        }
        hull((0..self.n).flat_map(|a| {
            (0..m).map(move |c| {
                let (i, j) = if axis == 0 { (a, c) } else { (c, a) };
                let (i1, j1) = if axis == 0 { (a + 1, c) } else { (c, a + 1) };
                self.coeff(i1, j1) - self.coeff(i, j)
            })
        }))
    }

    /// Coefficients along an edge: `v` fixed at its low (`hi == false`) or
    /// high end when `axis` is 1, `u` fixed when `axis` is 0. The result is
    /// the Bernstein patch of the restriction in the running variable.
    pub fn edge(&self, axis: usize, hi: bool) -> Vec<Interval> {
        let fixed = if hi { self.n } else { 0 };
        (0..=self.n)
            .map(|k| if axis == 0 { self.coeff(fixed, k) } else { self.coeff(k, fixed) })
            .collect()
    }

    /// Halves the box along `axis` (0 splits `u`), returning the low and
    /// high halves.
    pub fn split(&self, axis: usize) -> (Self, Self) {
        let m = self.n + 1;
        let mut lo = self.b.clone();
        let mut hi = self.b.clone();
        let half = Interval::point(0.5);
        let mut tmp = vec![Interval::point(0.0); m];
        for outer in 0..m {
            let idx = |k: usize| if axis == 0 { k * m + outer } else { outer * m + k };
            for (k, t) in tmp.iter_mut().enumerate() {
                *t = self.b[idx(k)];
            }
            lo[idx(0)] = tmp[0];
            hi[idx(self.n)] = tmp[self.n];
            for r in 1..m {
                for k in 0..(m - r) {
                    tmp[k] = (tmp[k] + tmp[k + 1]) * half;
                }
                lo[idx(r)] = tmp[0];
                hi[idx(self.n - r)] = tmp[self.n - r];
            }
        }
        (
            BernsteinPatch { n: self.n, b: lo },
            BernsteinPatch { n: self.n, b: hi },
        )
    }
}

/// Hull of a nonempty family of intervals.
pub fn hull(it: impl Iterator<Item = Interval>) -> Interval {
    it.reduce(|a, b| a.hull(&b)).unwrap_or(Interval::point(0.0))
}

/// Hull of the differences of consecutive coefficients of a univariate
/// Bernstein row: excludes 0 when the restriction is strictly monotone.
pub fn row_slope(row: &[Interval]) -> Interval {
    hull(row.windows(2).map(|w| w[1] - w[0]))
}
