//! Error type for simulation, serialization, and observation I/O.

use sem_core::SemError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    /// A process or true-model specification is structurally invalid.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// A sampling design is unusable (zero steps, non-positive horizon, ...).
    #[error("invalid sampling design: {0}")]
    InvalidDesign(String),

    /// A specification with callback components cannot be serialized.
    #[error("cannot serialize: {0}")]
    Unserializable(String),

    /// Reading or writing observation files failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON or CSV input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Covariance assembly for the true model failed.
    #[error(transparent)]
    Core(#[from] SemError),
}

pub type Result<T> = std::result::Result<T, SimError>;
