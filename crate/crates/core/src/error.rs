use thiserror::Error;

/// Errors produced anywhere in the simulation and estimation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("resolution overflow: level {level} needs 2^{level} <= grid/4 (grid = {grid})")]
    ResolutionOverflow { level: u32, grid: usize },

    #[error("non-integrable reciprocal: design exponent beta = {beta} must be < 1")]
    NonIntegrableReciprocal { beta: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("covariance not positive definite (n = {n})")]
    NotPositiveDefinite { n: usize },

    #[error("kernel not invertible on band: g({m}) = 0")]
    KernelNotInvertible { m: i64 },

    #[error("singular design point: {point} coincides with the density zero at {singularity}")]
    SingularDesignPoint { point: f64, singularity: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("unclassified regime: {0}")]
    UnclassifiedRegime(String),

    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("format error: {0}")]
    Format(String),

    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code: 2 for validation problems, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. }
            | Error::Validation(_)
            | Error::NonIntegrableReciprocal { .. }
            | Error::DimensionMismatch(_) => 2,
            Error::ResolutionOverflow { .. }
            | Error::NotPositiveDefinite { .. }
            | Error::KernelNotInvertible { .. }
            | Error::SingularDesignPoint { .. }
            | Error::DegenerateFit(_)
            | Error::UnclassifiedRegime(_) => 3,
            Error::Format(_) | Error::File { .. } | Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
