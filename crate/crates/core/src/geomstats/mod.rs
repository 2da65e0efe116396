//! Fubini–Study geometry and the statistics layer: volume-calibrated cells,
//! empirical measures, discrepancy, tube mass and growth fits.

mod measure;
mod partition;
mod regression;
mod sampler;

pub use measure::{integrate_test_function, tube_mass, tube_width, Discrepancy, EmpiricalMeasure, TestFunction};
pub use partition::{
    box_volume, box_volume_exact, build_partition, chart_point, from_chart, fs_density, Cell, CellPartition,
    ChartPoint,
};
pub use regression::{growth_regression, synthetic, GrowthPoint, Regression};
pub use sampler::{sample_fs_uniform, sampling_floor, sampling_floor_for};
