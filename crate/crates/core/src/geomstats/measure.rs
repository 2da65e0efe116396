//! Empirical measures on a partition, test functions and tube statistics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::partition::{chart_point, Cell, CellPartition};
use crate::critpoints::{fs_distance, normalize, CriticalPoint, CriticalPointSet};
use crate::error::{Error, Result};
use crate::poly::Space;

/// Binned counting measure pooled over trials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    pub counts: Vec<u64>,
    pub total: u64,
    pub trials: u64,
}

/// Distance between an empirical measure and the FS volume over the cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub sup: f64,
    pub l1: f64,
}

impl EmpiricalMeasure {
    pub fn new(cells: usize) -> Self {
        EmpiricalMeasure {
            counts: vec![0; cells],
            total: 0,
            trials: 0,
        }
    }

    pub fn add_point(&mut self, partition: &CellPartition, v: &[Complex64]) {
        self.counts[partition.locate(v)] += 1;
        self.total += 1;
    }

    /// Adds the points of one trial.
    pub fn accumulate(&mut self, partition: &CellPartition, points: &CriticalPointSet) {
        for p in &points.points {
            self.add_point(partition, &p.coords);
        }
        self.trials += 1;
    }

    /// Sum of two measures on the same partition.
    pub fn merge(&mut self, other: &EmpiricalMeasure) {
        assert_eq!(self.counts.len(), other.counts.len(), "measures on different partitions");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        self.trials += other.trials;
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.total as f64).collect()
    }

    /// Sup and L1 distance between cell frequencies and cell volumes.
    pub fn discrepancy(&self, partition: &CellPartition) -> Result<Discrepancy> {
        if self.total == 0 {
            return Err(Error::InvalidArgument("discrepancy of an empty measure".into()));
        }
        let mut out = Discrepancy { sup: 0.0, l1: 0.0 };
        for (f, c) in self.frequencies().iter().zip(&partition.cells) {
            let e = (f - c.fs_volume).abs();
            out.sup = out.sup.max(e);
            out.l1 += e;
        }
        Ok(out)
    }
}

/// A function `chi` on the space, integrated against empirical measures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TestFunction {
    /// Indicator of one partition cell.
    CellIndicator { space: Space, cell: Cell },
    /// `(1 - (r / radius)^2)^3` in the FS distance `r` to `center`, zero
    /// beyond `radius`; of class C².
    Bump { space: Space, center: Vec<Complex64>, radius: f64 },
}

impl TestFunction {
    pub fn bump(space: Space, center: &[Complex64], radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < std::f64::consts::FRAC_PI_4) {
            return Err(Error::InvalidArgument(format!("bump radius {radius} outside (0, pi/4)")));
        }
        Ok(TestFunction::Bump {
            space,
            center: normalize(space, center),
            radius,
        })
    }

    pub fn value(&self, v: &[Complex64]) -> f64 {
        match self {
            TestFunction::CellIndicator { space, cell } => {
                if cell.contains(&chart_point(*space, v)) {
                    1.0
                } else {
                    0.0
                }
            }
            TestFunction::Bump { space, center, radius } => {
                let r = fs_distance(*space, &normalize(*space, v), center) / radius;
                if r < 1.0 {
                    (1.0 - r * r).powi(3)
                } else {
                    0.0
                }
            }
        }
    }
}

/// `<nu, chi>` for the counting measure of `points`: the mean of `chi`.
pub fn integrate_test_function(chi: &TestFunction, points: &[Vec<Complex64>]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("no points to integrate over".into()));
    }
    Ok(points.iter().map(|v| chi.value(v)).sum::<f64>() / points.len() as f64)
}

/// Fraction of points within distance `2 w` of their conjugate, i.e. in
/// the tube of width `w` around the real locus.
pub fn tube_mass(points: &[CriticalPoint], w: f64) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::InvalidArgument(format!("tube width {w} must be positive")));
    }
    if points.is_empty() {
        return Err(Error::InvalidArgument("no points".into()));
    }
    let inside = points.iter().filter(|p| p.dist_to_conjugate <= 2.0 * w).count();
    Ok(inside as f64 / points.len() as f64)
}

/// The tube width `log d / sqrt d`.
pub fn tube_width(d: u32) -> f64 {
    let d = d as f64;
    d.ln() / d.sqrt()
}
