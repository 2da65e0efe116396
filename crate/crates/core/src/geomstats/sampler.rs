//! FS-uniform points by inverse CDF on the chart domains: the oracle
//! against which empirical measures are calibrated.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use super::partition::{build_partition, from_chart, CellPartition};
use super::measure::EmpiricalMeasure;
use crate::ensemble::trial_rng;
use crate::error::Result;
use crate::poly::Space;

/// Squared radius `a = |u|^2` on `[0, 1]` with density `2 (1 + a)^-2`.
fn cp1_radius_sq(u: f64) -> f64 {
    1.0 / (1.0 - 0.5 * u) - 1.0
}

/// `(a, b) = (|u|^2, |v|^2)` on `[0, 1]^2` with density proportional to
/// `(1 + a + b)^-3`: marginal of `a` by bisection on its CDF, then `b` from
/// the conditional CDF in closed form.
fn cp2_radii_sq(u1: f64, u2: f64) -> (f64, f64) {
    // Unnormalized marginal CDF: int_0^a int_0^1 (1+x+y)^-3 dy dx.
    let cdf = |a: f64| 0.5 * ((1.0 - 1.0 / (1.0 + a)) - (0.5 - 1.0 / (2.0 + a)));
    let target = u1 * cdf(1.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if cdf(m) < target {
            lo = m;
        } else {
            hi = m;
        }
    }
    let a = 0.5 * (lo + hi);
    // Conditional: int_0^b (1+a+y)^-3 dy = ((1+a)^-2 - (1+a+b)^-2) / 2.
    let p = (1.0 + a).powi(-2);
    let q = (1.0 + a + 1.0).powi(-2);
    let s = p - u2 * (p - q);
    let b = s.powf(-0.5) - 1.0 - a;
    (a, b.clamp(0.0, 1.0))
}

fn polar(a: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(a.sqrt(), theta)
}

/// One FS-uniform point in homogeneous coordinates.
pub fn sample_fs_uniform<R: Rng + ?Sized>(space: Space, rng: &mut R) -> Vec<Complex64> {
    // Chart domains have equal volume by symmetry.
    let chart = rng.random_range(0..space.num_charts());
    let u: Vec<Complex64> = match space {
        Space::Cp1 => vec![polar(cp1_radius_sq(rng.random()), TAU * rng.random::<f64>())],
        Space::Cp2 => {
            let (a, b) = cp2_radii_sq(rng.random(), rng.random());
            vec![polar(a, TAU * rng.random::<f64>()), polar(b, TAU * rng.random::<f64>())]
        }
        Space::Cp1xCp1 => (0..2)
            .map(|_| polar(cp1_radius_sq(rng.random()), TAU * rng.random::<f64>()))
            .collect(),
    };
    from_chart(space, chart, &u)
}

/// Mean sup-discrepancy of `n_points` FS-uniform points over `replicates`
/// independent draws: the sampling floor for a measure of that size.
pub fn sampling_floor(partition: &CellPartition, n_points: u64, replicates: u64, seed: u64) -> f64 {
    let mut acc = 0.0;
    for r in 0..replicates {
        let mut rng = trial_rng(seed, r);
        let mut m = EmpiricalMeasure::new(partition.len());
        for _ in 0..n_points {
            m.add_point(partition, &sample_fs_uniform(partition.space, &mut rng));
        }
        acc += m.discrepancy(partition).map(|d| d.sup).unwrap_or(0.0);
    }
    acc / replicates as f64
}

/// Convenience: the floor on a freshly built partition.
pub fn sampling_floor_for(space: Space, cells: usize, n_points: u64, replicates: u64, seed: u64) -> Result<f64> {
    Ok(sampling_floor(&build_partition(space, cells)?, n_points, replicates, seed))
}
