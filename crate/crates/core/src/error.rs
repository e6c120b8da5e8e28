use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected ambient dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what}: requires a cap of at least {required}, current cap is {cap}")]
    CapExceeded {
        what: String,
        required: String,
        cap: String,
    },

    #[error("invalid dual basis: {0}")]
    InvalidDualBasis(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("undefined distribution: {0}")]
    UndefinedDistribution(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("sparsification not verified after {samples} samples (sup distance {sup_distance})")]
    SparsifyFailed { samples: u64, sup_distance: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn cap_exceeded(
    what: impl Into<String>,
    required: impl ToString,
    cap: impl ToString,
) -> Error {
    Error::CapExceeded {
        what: what.into(),
        required: required.to_string(),
        cap: cap.to_string(),
    }
}
