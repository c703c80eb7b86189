//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("the given element set is not a subgroup")]
    NotASubgroup,

    #[error("interval endpoints are incomparable")]
    IncomparableEndpoints,

    #[error("operation requires a Boolean interval")]
    NotBoolean,

    #[error("two-box elements live in different models")]
    ModelMismatch,

    #[error("two-box elements live over different groups")]
    GroupMismatch,

    #[error("element is not positive (min eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },

    #[error("numerical integrity failure in {what}: residual {residual:.3e} >= tolerance {tolerance:.3e} (seed {seed})")]
    Integrity {
        what: String,
        residual: f64,
        tolerance: f64,
        seed: u64,
    },

    #[error("retries exhausted in {what} after {attempts} attempts (seed {seed})")]
    RetriesExhausted {
        what: String,
        attempts: u32,
        seed: u64,
    },

    #[error("unsupported output format: {0}")]
    UnsupportedFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn integrity(what: impl Into<String>, residual: f64, tolerance: f64, seed: u64) -> Self {
        Error::Integrity {
            what: what.into(),
            residual,
            tolerance,
            seed,
        }
    }

    /// Process exit code mandated for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::DegreeMismatch { .. } | Error::UnsupportedFormat(_) => 64,
            Error::CapExceeded { .. } => 65,
            Error::Integrity { .. } | Error::RetriesExhausted { .. } => 2,
            _ => 1,
        }
    }
}
