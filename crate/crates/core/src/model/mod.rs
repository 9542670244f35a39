//! The sampling model: designs, kernels, long-memory noise, test functions and observations.

pub mod design;
pub mod kernel;
pub mod noise;
pub mod observation;
pub mod testfn;

pub use design::{normalize_density, quantile_design, DesignDensity};
pub use kernel::{KernelBounds, KernelShape, KernelSpec};
pub use noise::{
    covariance_extremes, fgn_autocovariance, lrd_covariance, sample_errors, Factorization, NoiseKind,
    NoiseSampler, NoiseSpec,
};
pub use observation::{clean_signal, simulate_observations, ObservationGrid, SimulationPlan, Simulator};
pub use testfn::{FunctionChoice, Profile, SeparableTerm, Term, TestFunction};
