//! Volume-calibrated cells on `CP1`, `CP2` and `CP1 x CP1`.
//!
//! Every point is normalized into the chart of its largest-modulus
//! homogeneous coordinate (per factor on `CP1 x CP1`), where the affine
//! coordinates satisfy `|u_i| <= 1`. Cells are boxes in the polar
//! coordinates `(|u_i|, arg u_i)` of that chart.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Space;
use crate::quadrature::gauss_legendre_on;

/// Nodes per radial dimension in the volume quadrature.
const RADIAL_NODES: usize = 24;

/// A box `{ |u_i| in radial[i], arg u_i in angular[i] }` of one chart.
/// Intervals are half-open except at `|u| = 1` and `arg = 2 pi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub chart: usize,
    pub radial: Vec<(f64, f64)>,
    pub angular: Vec<(f64, f64)>,
    pub fs_volume: f64,
    /// Next coordinate to halve: `2 i` is `arg u_i`, `2 i + 1` is `|u_i|`.
    pub next_split: usize,
}

/// Chart index and polar coordinates `(|u_i|, arg u_i)` of a point.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint {
    pub chart: usize,
    pub radius: Vec<f64>,
    pub angle: Vec<f64>,
}

fn argmax_modulus(v: &[Complex64]) -> usize {
    // Ties go to the smallest index.
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() {
            best = i;
        }
    }
    best
}

fn angle(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        let b = a + TAU;
        if b >= TAU {
            0.0
        } else {
            b
        }
    } else {
        a
    }
}

/// Chart coordinates of a homogeneous point.
pub fn chart_point(space: Space, v: &[Complex64]) -> ChartPoint {
    assert_eq!(v.len(), space.num_vars(), "point has the wrong number of coordinates");
    let mut out = ChartPoint {
        chart: 0,
        radius: Vec::new(),
        angle: Vec::new(),
    };
    let mut push_factor = |w: &[Complex64], offset: usize| {
        let k = argmax_modulus(w);
        for (i, z) in w.iter().enumerate() {
            if i != k {
                let u = z / w[k];
                out.radius.push(u.norm().min(1.0));
                out.angle.push(angle(u));
            }
        }
        k * offset
    };
    out.chart = match space {
        Space::Cp1xCp1 => push_factor(&v[..2], 2) + push_factor(&v[2..], 1),
        _ => push_factor(v, 1),
    };
    out
}

/// Homogeneous coordinates of a chart point (the chart coordinate set to 1).
pub fn from_chart(space: Space, chart: usize, u: &[Complex64]) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let lift = |k: usize, n: usize, u: &[Complex64]| {
        let mut it = u.iter();
        (0..n).map(|i| if i == k { one } else { *it.next().unwrap() }).collect::<Vec<_>>()
    };
    match space {
        Space::Cp1xCp1 => {
            let mut a = lift(chart / 2, 2, &u[..1]);
            a.extend(lift(chart % 2, 2, &u[1..]));
            a
        }
        _ => lift(chart, space.num_vars(), u),
    }
}

/// Normalized FS density with respect to Lebesgue measure on the chart
/// coordinates `u`.
pub fn fs_density(space: Space, u: &[Complex64]) -> f64 {
    let n2 = |z: &Complex64| z.norm_sqr();
    match space {
        Space::Cp1 => 1.0 / (PI * (1.0 + n2(&u[0])).powi(2)),
        Space::Cp2 => 2.0 / (PI * PI * (1.0 + n2(&u[0]) + n2(&u[1])).powi(3)),
        Space::Cp1xCp1 => fs_density(Space::Cp1, &u[..1]) * fs_density(Space::Cp1, &u[1..]),
    }
}

/// FS volume of a polar box by tensor Gauss–Legendre quadrature in the
/// radii. The density does not depend on the angles, which contribute
/// their lengths.
pub fn box_volume(space: Space, radial: &[(f64, f64)], angular: &[(f64, f64)]) -> f64 {
    let angles: f64 = angular.iter().map(|(a, b)| b - a).product();
    let rules: Vec<Vec<(f64, f64)>> = radial
        .iter()
        .map(|&(a, b)| gauss_legendre_on(RADIAL_NODES, a, b))
        .collect();
    let radial_integral = match space {
        Space::Cp1 => rules[0]
            .iter()
            .map(|&(r, w)| w * r * fs_density(space, &[Complex64::new(r, 0.0)]))
            .sum::<f64>(),
        _ => {
            let mut acc = 0.0;
            for &(r, wr) in &rules[0] {
                for &(s, ws) in &rules[1] {
                    let u = [Complex64::new(r, 0.0), Complex64::new(s, 0.0)];
                    acc += wr * ws * r * s * fs_density(space, &u);
                }
            }
            acc
        }
    };
    angles * radial_integral
}

/// Closed-form FS volume of a polar box, used to validate the quadrature.
pub fn box_volume_exact(space: Space, radial: &[(f64, f64)], angular: &[(f64, f64)]) -> f64 {
    let angles: f64 = angular.iter().map(|(a, b)| b - a).product();
    let cp1 = |(r0, r1): (f64, f64)| 1.0 / (1.0 + r0 * r0) - 1.0 / (1.0 + r1 * r1);
    match space {
        Space::Cp1 => angles / TAU * cp1(radial[0]),
        Space::Cp2 => {
            let f = |a: f64, b: f64| 1.0 / (1.0 + a + b);
            let (a0, a1) = (radial[0].0.powi(2), radial[0].1.powi(2));
            let (b0, b1) = (radial[1].0.powi(2), radial[1].1.powi(2));
            angles / (4.0 * PI * PI) * (f(a1, b1) - f(a0, b1) - f(a1, b0) + f(a0, b0))
        }
        Space::Cp1xCp1 => angles / (TAU * TAU) * cp1(radial[0]) * cp1(radial[1]),
    }
}

impl Cell {
    fn whole_chart(space: Space, chart: usize) -> Cell {
        let dim = space.dimension();
        let radial = vec![(0.0, 1.0); dim];
        let angular = vec![(0.0, TAU); dim];
        Cell {
            chart,
            fs_volume: box_volume(space, &radial, &angular),
            radial,
            angular,
            next_split: 0,
        }
    }

    /// Whether the chart point lies in the box.
    pub fn contains(&self, p: &ChartPoint) -> bool {
        let inside = |x: f64, (lo, hi): (f64, f64), top: f64| lo <= x && (x < hi || (hi == top && x <= hi));
        p.chart == self.chart
            && p.radius.iter().zip(&self.radial).all(|(&r, &iv)| inside(r, iv, 1.0))
            && p.angle.iter().zip(&self.angular).all(|(&a, &iv)| inside(a, iv, TAU))
    }

    /// Halves the box along its next coordinate: angles at the midpoint,
    /// radii at the point that splits the volume evenly.
    pub fn split(&self, space: Space) -> [Cell; 2] {
        let dim = space.dimension();
        let coord = self.next_split % (2 * dim);
        let i = coord / 2;
        let (mut lo, mut hi) = (self.clone(), self.clone());
        if coord % 2 == 0 {
            let (a, b) = self.angular[i];
            let m = 0.5 * (a + b);
            lo.angular[i] = (a, m);
            hi.angular[i] = (m, b);
        } else {
            let (a, b) = self.radial[i];
            let half = 0.5 * self.fs_volume;
            let vol_below = |m: f64| {
                let mut r = self.radial.clone();
                r[i] = (a, m);
                box_volume(space, &r, &self.angular)
            };
            let (mut x0, mut x1) = (a, b);
            for _ in 0..60 {
                let m = 0.5 * (x0 + x1);
                if vol_below(m) < half {
                    x0 = m;
                } else {
                    x1 = m;
                }
            }
            let m = 0.5 * (x0 + x1);
            lo.radial[i] = (a, m);
            hi.radial[i] = (m, b);
        }
        for c in [&mut lo, &mut hi] {
            c.fs_volume = box_volume(space, &c.radial, &c.angular);
            c.next_split = self.next_split + 1;
        }
        [lo, hi]
    }
}

/// Disjoint cells covering the space, with FS volumes summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellPartition {
    pub space: Space,
    pub cells: Vec<Cell>,
}

/// Builds a partition with exactly `k` cells. Starting from the chart
/// domains, the cell of largest volume (lowest index on ties) is halved
/// until the count is reached.
pub fn build_partition(space: Space, k: usize) -> Result<CellPartition> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 cells, got {k}")));
    }
    let charts = space.num_charts();
    let mut cells: Vec<Cell> = (0..charts).map(|c| Cell::whole_chart(space, c)).collect();
    if cells.len() > k {
        return Err(Error::InvalidArgument(format!(
            "{space} has {charts} chart domains; at least that many cells are needed"
        )));
    }
    while cells.len() < k {
        let mut best = 0;
        for (i, c) in cells.iter().enumerate() {
            if c.fs_volume > cells[best].fs_volume * (1.0 + 1e-12) {
                best = i;
            }
        }
        let [a, b] = cells[best].split(space);
        cells[best] = a;
        cells.insert(best + 1, b);
    }
    Ok(CellPartition { space, cells })
}

impl CellPartition {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn total_volume(&self) -> f64 {
        self.cells.iter().map(|c| c.fs_volume).sum()
    }

    /// Halves every cell.
    pub fn refine(&self) -> CellPartition {
        CellPartition {
            space: self.space,
            cells: self.cells.iter().flat_map(|c| c.split(self.space)).collect(),
        }
    }

    /// Index of the cell holding a homogeneous point.
    ///
    /// # Panics
    ///
    /// If no cell claims the point, which means the partition does not
    /// cover its chart.
    pub fn locate(&self, v: &[Complex64]) -> usize {
        let p = chart_point(self.space, v);
        self.cells
            .iter()
            .position(|c| c.contains(&p))
            .unwrap_or_else(|| panic!("point {v:?} (chart {}) outside every cell", p.chart))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cp1_halves() {
        let p = build_partition(Space::Cp1, 2).unwrap();
        assert_eq!(p.len(), 2);
        for c in &p.cells {
            assert!((c.fs_volume - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for space in [Space::Cp1, Space::Cp2, Space::Cp1xCp1] {
            let p = build_partition(space, 64).unwrap();
            for c in &p.cells {
                let exact = box_volume_exact(space, &c.radial, &c.angular);
                assert!((c.fs_volume - exact).abs() < 1e-8 * exact, "{space}: {} vs {exact}", c.fs_volume);
            }
            assert!((p.total_volume() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn refinement_is_additive() {
        for space in [Space::Cp1, Space::Cp2, Space::Cp1xCp1] {
            let p = build_partition(space, 12).unwrap();
            let r = p.refine();
            for (i, c) in p.cells.iter().enumerate() {
                let sum = r.cells[2 * i].fs_volume + r.cells[2 * i + 1].fs_volume;
                assert!((sum - c.fs_volume).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn chart_round_trip() {
        let u = [Complex64::new(0.3, -0.4), Complex64::new(-0.1, 0.9)];
        for space in [Space::Cp2, Space::Cp1xCp1] {
            for chart in 0..space.num_charts() {
                let v = from_chart(space, chart, &u);
                let p = chart_point(space, &v);
                assert_eq!(p.chart, chart);
                for (i, z) in u.iter().enumerate() {
                    assert!((p.radius[i] - z.norm()).abs() < 1e-15);
                    assert!((p.angle[i] - angle(*z)).abs() < 1e-15);
                }
            }
        }
    }
}
