//! Random sections of line bundles on `CP1`, `CP2` and `CP1 x CP1`:
//! Gaussian ensembles, certified root and critical-point solvers, and the
//! Monte Carlo experiments built on top of them.

pub mod critpoints;
pub mod ensemble;
pub mod error;
pub mod exact;
pub mod geomstats;
pub mod interval;
pub mod pmcheck;
pub mod poly;
pub mod quadrature;
pub mod runner;
pub mod topology;
pub mod uniroots;

pub use ensemble::{l2_inner_product, l2_norm, sample_section, EnsembleSpec, Field};
pub use error::{Error, Result};
pub use poly::{AffinePolynomial, Degree, HomogeneousPolynomial, MultiIndex, Space};
