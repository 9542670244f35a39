//! Risk measurement, rate regimes and Monte Carlo verification suites.

pub mod besov;
pub mod lemmas;
mod rate;
mod risk;
mod scenario;
pub mod stats;

pub use besov::{theoretical_exponent, BesovParams, RateClass};
pub use rate::{fit_rate, rate_experiment, Ladder, RatePoint, RateReport};
pub use risk::{grid_loss, mise};
pub use scenario::{Pipeline, Scenario};
