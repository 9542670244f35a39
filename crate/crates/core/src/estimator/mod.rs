//! Thresholded wavelet deconvolution estimator.

mod config;
mod engine;
mod field;
mod index;
pub mod inversion;
mod reconstruct;

pub use config::{choose_levels, effective_size, threshold, EstimatorConfig, ThresholdRule};
pub use engine::{estimate_coefficient, true_coefficients, Estimator, Setup};
pub use field::{hard_threshold, CoefficientField, Entry};
pub use index::{AxisRange, Index, IndexSet};
pub use inversion::compute_u;
pub use reconstruct::{analyze_grid, reconstruct, synthesize, uniform_points, Reconstruction};
