//! Krawczyk test for a real critical point on a real box of the chart.

use super::pencil::{Chart, ChartMap};
use crate::interval::{eval_homogeneous, Interval};
use crate::poly::HomogeneousPolynomial;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KrawczykOutcome {
    /// A unique real solution lies in the box of this radius around the
    /// given center.
    Certified { s: f64, t: f64, radius: f64 },
    /// The Krawczyk image never landed inside the box.
    NotContained,
    /// The Jacobian at the center is numerically singular.
    Singular,
}

impl KrawczykOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, KrawczykOutcome::Certified { .. })
    }
}

struct System<'a> {
    f: [&'a HomogeneousPolynomial; 2],
    grads: [Vec<HomogeneousPolynomial>; 2],
    origin: Vec<f64>,
    ts: Vec<f64>,
    tt: Vec<f64>,
}

impl System<'_> {
    fn coords(&self, s: Interval, t: Interval) -> Vec<Interval> {
        (0..self.origin.len())
            .map(|k| Interval::point(self.origin[k]) + s.scale(self.ts[k]) + t.scale(self.tt[k]))
            .collect()
    }

    fn values(&self, s: Interval, t: Interval) -> [Interval; 2] {
        let v = self.coords(s, t);
        [eval_homogeneous(self.f[0], &v), eval_homogeneous(self.f[1], &v)]
    }

    fn jacobian(&self, s: Interval, t: Interval) -> [[Interval; 2]; 2] {
        let v = self.coords(s, t);
        let mut j = [[Interval::point(0.0); 2]; 2];
        for (i, row) in j.iter_mut().enumerate() {
            for (k, g) in self.grads[i].iter().enumerate() {
                let dk = eval_homogeneous(g, &v);
                row[0] = row[0] + dk.scale(self.ts[k]);
                row[1] = row[1] + dk.scale(self.tt[k]);
            }
        }
        j
    }
}

fn inverse(m: [[f64; 2]; 2]) -> Option<[[f64; 2]; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    if !(det.abs() > 1e-14 * scale * scale) {
        return None;
    }
    Some([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]])
}

/// Certifies a unique real solution of `f1 = f2 = 0` near the chart point
/// `(s, t)` of `chart` by the Krawczyk operator on a square box, inflating the box a
/// few times if needed.
pub fn krawczyk_real(
    f1: &HomogeneousPolynomial,
    f2: &HomogeneousPolynomial,
    map: &ChartMap,
    chart: Chart,
    s: f64,
    t: f64,
) -> KrawczykOutcome {
    let n = f1.space().num_vars();
    let grad = |f: &HomogeneousPolynomial| -> Option<Vec<HomogeneousPolynomial>> {
        (0..n).map(|k| f.partial_derivative(k).ok()).collect()
    };
    let (Some(g1), Some(g2)) = (grad(f1), grad(f2)) else {
        return KrawczykOutcome::Singular;
    };
    let [origin, ts, tt] = map.frame(chart);
    let sys = System {
        f: [f1, f2],
        grads: [g1, g2],
        origin,
        ts,
        tt,
    };
    let mid_j = |s: f64, t: f64| {
        let j = sys.jacobian(Interval::point(s), Interval::point(t));
        [[j[0][0].mid(), j[0][1].mid()], [j[1][0].mid(), j[1][1].mid()]]
    };
    // One Newton step from the supplied point: both a better center and a
    // scale for the box.
    let Some(y) = inverse(mid_j(s, t)) else {
        return KrawczykOutcome::Singular;
    };
    let fv = sys.values(Interval::point(s), Interval::point(t));
    let (f0, f1v) = (fv[0].mid(), fv[1].mid());
    let (ds, dt) = (y[0][0] * f0 + y[0][1] * f1v, y[1][0] * f0 + y[1][1] * f1v);
    let (ms, mt) = (s - ds, t - dt);
    let Some(y) = inverse(mid_j(ms, mt)) else {
        return KrawczykOutcome::Singular;
    };
    let mut radius = (10.0 * ds.hypot(dt)).max(1e-12 * (1.0 + ms.abs().max(mt.abs())));
    for _ in 0..6 {
        let bs = Interval::centered(ms, radius);
        let bt = Interval::centered(mt, radius);
        let fm = sys.values(Interval::point(ms), Interval::point(mt));
        let j = sys.jacobian(bs, bt);
        let dx = [bs - Interval::point(ms), bt - Interval::point(mt)];
        let yi = |r: usize, c: usize| Interval::point(y[r][c]);
        let mut k = [Interval::point(ms), Interval::point(mt)];
        for r in 0..2 {
            k[r] = k[r] - (yi(r, 0) * fm[0] + yi(r, 1) * fm[1]);
            for c in 0..2 {
                // (I - Y J)[r][c]
                let id = Interval::point(if r == c { 1.0 } else { 0.0 });
                let m = id - (yi(r, 0) * j[0][c] + yi(r, 1) * j[1][c]);
                k[r] = k[r] + m * dx[c];
            }
        }
        if !(k[0].is_finite() && k[1].is_finite()) {
            return KrawczykOutcome::NotContained;
        }
        if k[0].interior_of(&bs) && k[1].interior_of(&bt) {
            return KrawczykOutcome::Certified { s: ms, t: mt, radius };
        }
        radius *= 8.0;
    }
    KrawczykOutcome::NotContained
}
