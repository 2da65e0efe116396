//! Log-log growth fits.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// One point of a growth sweep: degree, mean and its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub d: u32,
    pub mean: f64,
    pub stderr: f64,
}

/// Fit of `log(mean) = intercept + slope log(d)` with a 95% slope interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regression {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub slope_ci: (f64, f64),
    pub n: usize,
}

/// Weighted least squares of `log(mean)` on `log(d)`. Weights are the
/// inverse variances `(mean / stderr)^2` of `log(mean)` by the delta
/// method; when any standard error is zero the fit is unweighted.
pub fn growth_regression(points: &[GrowthPoint]) -> Result<Regression> {
    let mut ds: Vec<u32> = points.iter().map(|p| p.d).collect();
    ds.sort_unstable();
    ds.dedup();
    if ds.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "growth regression needs 4 distinct degrees, got {}",
            ds.len()
        )));
    }
    if let Some(p) = points.iter().find(|p| !(p.mean > 0.0)) {
        return Err(Error::InvalidArgument(format!("non-positive mean {} at d = {}", p.mean, p.d)));
    }
    let weighted = points.iter().all(|p| p.stderr > 0.0);
    let w: Vec<f64> = points
        .iter()
        .map(|p| if weighted { (p.mean / p.stderr).powi(2) } else { 1.0 })
        .collect();
    let x: Vec<f64> = points.iter().map(|p| (p.d as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.mean.ln()).collect();
    let sw: f64 = w.iter().sum();
    let xm = w.iter().zip(&x).map(|(w, x)| w * x).sum::<f64>() / sw;
    let ym = w.iter().zip(&y).map(|(w, y)| w * y).sum::<f64>() / sw;
    let sxx: f64 = w.iter().zip(&x).map(|(w, x)| w * (x - xm).powi(2)).sum();
    let sxy: f64 = (0..x.len()).map(|i| w[i] * (x[i] - xm) * (y[i] - ym)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let n = points.len();
    let rss: f64 = (0..n).map(|i| w[i] * (y[i] - intercept - slope * x[i]).powi(2)).sum();
    let dof = (n - 2) as f64;
    let slope_se = (rss / dof / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?
        .inverse_cdf(0.975);
    Ok(Regression {
        slope,
        intercept,
        slope_se,
        slope_ci: (slope - t * slope_se, slope + t * slope_se),
        n,
    })
}

/// Exact synthetic data `mean = g(d)` over the given degrees.
pub fn synthetic(ds: impl IntoIterator<Item = u32>, g: impl Fn(f64) -> f64) -> Vec<GrowthPoint> {
    ds.into_iter()
        .map(|d| GrowthPoint {
            d,
            mean: g(d as f64),
            stderr: 0.0,
        })
        .collect()
}
