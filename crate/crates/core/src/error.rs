use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Host and object centers coincide, so the approach direction is undefined.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// The normalization divisor would be zero.
    #[error("degenerate normalization{}", match .driver {
        Some(d) => alloc::format!(" for driver {d}"),
        None => String::new(),
    })]
    DegenerateNormalization { driver: Option<String> },

    #[error("observed values have zero variance")]
    UndefinedVariance,

    /// Loss became non-finite; `trace` holds the subsampled losses seen so far.
    #[error("optimization diverged at iteration {iteration} (horizon {horizon} s)")]
    OptimizationFailure {
        horizon: f64,
        iteration: usize,
        trace: Vec<f64>,
    },

    #[error("degenerate synthetic spec: {0}")]
    DegenerateSpec(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
