pub mod analysis;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod model;
pub mod series;
pub mod wavelets;

pub use error::{Error, Result};
pub use series::TrigSeries;
