//! Component count of a real plane curve by certified subdivision.
//!
//! `RP2` is covered by three closed squares, `|u|, |v| <= 1` in the affine
//! chart where `x_k` has the largest modulus. Each square is subdivided
//! until a box is empty (the Bernstein hull excludes 0) or carries a single
//! arc. A box carries a single arc when one partial derivative keeps its
//! sign (so the curve is a graph and has no closed pieces inside), every
//! edge is either free of zeros or strictly monotone, and exactly two edges
//! see a sign change. Arcs are then joined across the edge segment that
//! holds the sign change, which never merges two distinct arcs that merely
//! pass through neighbouring boxes.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bernstein::{row_slope, BernsteinPatch};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::poly::{HomogeneousPolynomial, Space};

/// Boxes examined before the remaining ones are given up as uncertified.
const NODE_BUDGET: usize = 1 << 20;

/// Outcome of the subdivision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCount {
    pub components: usize,
    /// Every curve-carrying leaf holds a single certified arc and every
    /// gluing step was decided by certified signs.
    pub certified: bool,
    /// Deepest subdivision level reached.
    pub depth: u32,
    /// Curve-carrying leaves.
    pub leaves: usize,
    /// Leaves left at `max_depth` without a certificate.
    pub uncertified: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

const SIDES: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

impl Side {
    /// Axis held fixed along the side (0 is `u`).
    fn axis(self) -> usize {
        match self {
            Side::Left | Side::Right => 0,
            Side::Bottom | Side::Top => 1,
        }
    }

    fn is_hi(self) -> bool {
        matches!(self, Side::Right | Side::Top)
    }
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Arc([Side; 2]),
    Uncertified,
}

#[derive(Clone, Copy, Debug)]
struct Leaf {
    chart: usize,
    lo: [f64; 2],
    hi: [f64; 2],
    kind: Kind,
}

enum Certificate {
    Empty,
    Arc([Side; 2]),
    Unknown,
}

fn other_vars(chart: usize) -> [usize; 2] {
    match chart {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

/// Dehomogenized real coefficients `a[i * (d + 1) + j]` of `u^i v^j` in
/// each chart.
struct Charts {
    n: usize,
    coeffs: Vec<Vec<f64>>,
}

impl Charts {
    fn new(f: &HomogeneousPolynomial) -> Result<Self> {
        let n = f.d() as usize;
        let coeffs = (0..3)
            .map(|k| Ok(f.dehomogenize(k)?.coeffs().iter().map(|c| c.re).collect()))
            .collect::<Result<Vec<Vec<f64>>>>()?;
        Ok(Charts { n, coeffs })
    }

    /// Certified sign of the chart polynomial at a point, `None` when the
    /// enclosure contains 0.
    fn sign(&self, chart: usize, u: f64, v: f64) -> Option<i8> {
        let m = self.n + 1;
        let a = &self.coeffs[chart];
        let (u, v) = (Interval::point(u), Interval::point(v));
        let mut acc = Interval::point(0.0);
        for i in (0..m).rev() {
            let row = (0..m - i)
                .rev()
                .fold(Interval::point(0.0), |r, j| r * v + Interval::point(a[i * m + j]));
            acc = acc * u + row;
        }
        if acc.lo > 0.0 {
            Some(1)
        } else if acc.hi < 0.0 {
            Some(-1)
        } else {
            None
        }
    }
}

fn corner(lo: [f64; 2], hi: [f64; 2], side: Side, end: bool) -> (f64, f64) {
    let a = side.axis();
    let fixed = if side.is_hi() { hi[a] } else { lo[a] };
    let run = if end { hi[1 - a] } else { lo[1 - a] };
    if a == 0 {
        (fixed, run)
    } else {
        (run, fixed)
    }
}

fn certify(charts: &Charts, patch: &BernsteinPatch, chart: usize, lo: [f64; 2], hi: [f64; 2]) -> Certificate {
    if !patch.range().contains_zero() {
        return Certificate::Empty;
    }
    if patch.partial_range(0).contains_zero() && patch.partial_range(1).contains_zero() {
        return Certificate::Unknown;
    }
    let mut crossing = Vec::with_capacity(2);
    for side in SIDES {
        let row = patch.edge(side.axis(), side.is_hi());
        let hull = super::bernstein::hull(row.iter().copied());
        if !hull.contains_zero() {
            continue;
        }
        if row_slope(&row).contains_zero() {
            return Certificate::Unknown;
        }
        let (u0, v0) = corner(lo, hi, side, false);
        let (u1, v1) = corner(lo, hi, side, true);
        match (charts.sign(chart, u0, v0), charts.sign(chart, u1, v1)) {
            (Some(a), Some(b)) if a != b => crossing.push(side),
            (Some(_), Some(_)) => {}
            _ => return Certificate::Unknown,
        }
    }
    match crossing.as_slice() {
        [] => Certificate::Empty,
        &[a, b] => Certificate::Arc([a, b]),
        _ => Certificate::Unknown,
    }
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

type EdgeKey = (usize, usize, bool, u64);

fn key(chart: usize, axis: usize, hi: bool, x: f64) -> EdgeKey {
    (chart, axis, hi, (x + 0.0).to_bits())
}

struct Complex {
    leaves: Vec<Leaf>,
    index: HashMap<EdgeKey, Vec<usize>>,
}

impl Complex {
    fn new(leaves: Vec<Leaf>) -> Self {
        let mut index: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
        for (i, l) in leaves.iter().enumerate() {
            for axis in 0..2 {
                index.entry(key(l.chart, axis, false, l.lo[axis])).or_default().push(i);
                index.entry(key(l.chart, axis, true, l.hi[axis])).or_default().push(i);
            }
        }
        Complex { leaves, index }
    }

    /// Curve-carrying leaves across `side` of leaf `i`, each with the shared
    /// segment in the running coordinate of `i`'s side.
    fn neighbours(&self, i: usize, side: Side) -> Vec<(usize, f64, f64)> {
        let l = &self.leaves[i];
        let a = side.axis();
        let r = 1 - a;
        let c = if side.is_hi() { l.hi[a] } else { l.lo[a] };
        let (run_lo, run_hi) = (l.lo[r], l.hi[r]);
        let outer = (side.is_hi() && c == 1.0) || (!side.is_hi() && c == -1.0);
        let mut out = Vec::new();
        if !outer {
            for &j in self.index.get(&key(l.chart, a, !side.is_hi(), c)).into_iter().flatten() {
                let n = &self.leaves[j];
                let (s0, s1) = (run_lo.max(n.lo[r]), run_hi.min(n.hi[r]));
                if s0 < s1 {
                    out.push((j, s0, s1));
                }
            }
            return out;
        }
        // On the square's boundary |x_var| = |x_k|: the same points lie on
        // the boundary of chart `var`, where x_k / x_var = c and the other
        // coordinate is scaled by c.
        let vars = other_vars(l.chart);
        let target = vars[a];
        let tv = other_vars(target);
        let pk = tv.iter().position(|&x| x == l.chart).expect("chart index");
        let pb = tv.iter().position(|&x| x == vars[r]).expect("chart index");
        for &j in self.index.get(&key(target, pk, c > 0.0, c)).into_iter().flatten() {
            let n = &self.leaves[j];
            let (w0, w1) = (c * n.lo[pb], c * n.hi[pb]);
            let (w0, w1) = (w0.min(w1), w0.max(w1));
            let (s0, s1) = (run_lo.max(w0), run_hi.min(w1));
            if s0 < s1 {
                out.push((j, s0, s1));
            }
        }
        out
    }
}

fn edge_point(l: &Leaf, side: Side, run: f64) -> (f64, f64) {
    let a = side.axis();
    let fixed = if side.is_hi() { l.hi[a] } else { l.lo[a] };
    if a == 0 {
        (fixed, run)
    } else {
        (run, fixed)
    }
}

/// Rotations applied before subdividing, so that no curve met in practice
/// (a circle, a coordinate line) is tangent to the squares' edges or passes
/// through their corners. Components are invariant under them.
const FRAME_ROTATIONS: [(usize, usize, f64); 3] = [(0, 1, 0.311), (1, 2, 0.467), (0, 2, 0.593)];

fn generic_frame(f: &HomogeneousPolynomial) -> Result<HomogeneousPolynomial> {
    FRAME_ROTATIONS.iter().try_fold(f.clone(), |g, &(a, b, angle)| {
        let (s, c) = angle.sin_cos();
        let m = [
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ];
        g.linear_substitution(a, b, m)
    })
}

/// Counts the connected components of the real locus of `f` on `RP2`.
pub fn real_locus_components(f: &HomogeneousPolynomial, max_depth: u32) -> Result<ComponentCount> {
    if f.space() != Space::Cp2 {
        return Err(Error::InvalidArgument("component counting needs a plane curve".into()));
    }
    if !f.is_real() || f.is_zero() {
        return Err(Error::InvalidArgument("component counting needs a nonzero real section".into()));
    }
    let charts = Charts::new(&generic_frame(f)?)?;
    let mut leaves = Vec::new();
    let mut depth = 0;
    let mut visited = 0usize;
    for chart in 0..3 {
        let patch = BernsteinPatch::on_unit_square(&charts.coeffs[chart], charts.n);
        let mut stack = vec![(patch, [-1.0, -1.0], [1.0, 1.0], 0u32)];
        while let Some((patch, lo, hi, level)) = stack.pop() {
            visited += 1;
            depth = depth.max(level);
            match certify(&charts, &patch, chart, lo, hi) {
                Certificate::Empty => {}
                Certificate::Arc(sides) => leaves.push(Leaf {
                    chart,
                    lo,
                    hi,
                    kind: Kind::Arc(sides),
                }),
                Certificate::Unknown if level >= max_depth || visited >= NODE_BUDGET => {
                    leaves.push(Leaf {
                        chart,
                        lo,
                        hi,
                        kind: Kind::Uncertified,
                    })
                }
                Certificate::Unknown => {
                    let mu = 0.5 * (lo[0] + hi[0]);
                    let mv = 0.5 * (lo[1] + hi[1]);
                    let (left, right) = patch.split(0);
                    let (ll, lu) = left.split(1);
                    let (rl, ru) = right.split(1);
                    let next = level + 1;
                    stack.push((ru, [mu, mv], hi, next));
                    stack.push((rl, [mu, lo[1]], [hi[0], mv], next));
                    stack.push((lu, [lo[0], mv], [mu, hi[1]], next));
                    stack.push((ll, lo, [mu, mv], next));
                }
            }
        }
    }
    let complex = Complex::new(leaves);
    let n = complex.leaves.len();
    let mut uf = UnionFind((0..n).collect());
    let mut certified = true;
    let mut uncertified = 0;
    for i in 0..n {
        let leaf = complex.leaves[i];
        match leaf.kind {
            Kind::Uncertified => {
                uncertified += 1;
                certified = false;
                for side in SIDES {
                    for (j, _, _) in complex.neighbours(i, side) {
                        uf.union(i, j);
                    }
                }
            }
            Kind::Arc(sides) => {
                for side in sides {
                    let mut hits = Vec::new();
                    let mut decided = true;
                    for (j, s0, s1) in complex.neighbours(i, side) {
                        let (u0, v0) = edge_point(&leaf, side, s0);
                        let (u1, v1) = edge_point(&leaf, side, s1);
                        match (charts.sign(leaf.chart, u0, v0), charts.sign(leaf.chart, u1, v1)) {
                            (Some(a), Some(b)) if a != b => hits.push(j),
                            (Some(_), Some(_)) => {}
                            _ => decided = false,
                        }
                    }
                    if !decided || hits.len() != 1 {
                        certified = false;
                    }
                    for j in hits {
                        uf.union(i, j);
                    }
                }
            }
        }
    }
    let mut roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(ComponentCount {
        components: roots.len(),
        certified,
        depth,
        leaves: n,
        uncertified,
    })
}
