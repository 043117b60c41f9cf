//! Error type for campaign configuration and execution.

use thiserror::Error;

/// Errors surfaced by campaign validation and the experiment drivers.
///
/// Per-replicate simulation or estimation failures inside a campaign never
/// surface here: they are recorded on the affected rows and the campaign
/// keeps running.
#[derive(Debug, Error)]
pub enum McError {
    /// The campaign document is structurally invalid.
    #[error("invalid campaign config: {0}")]
    InvalidConfig(String),

    /// An experiment driver could not produce a result at all (for
    /// example, every replicate failed to converge).
    #[error("experiment failed: {0}")]
    Experiment(String),

    /// Simulation error outside the per-replicate fault boundary.
    #[error(transparent)]
    Sim(#[from] jump_sim::SimError),

    /// Estimation error outside the per-replicate fault boundary.
    #[error(transparent)]
    Qmle(#[from] qmle::QmleError),

    /// Model-layer error (covariance assembly, information matrix).
    #[error(transparent)]
    Core(#[from] sem_core::SemError),

    /// Artifact I/O error.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Artifact serialization error.
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-local result alias.
pub type Result<T> = std::result::Result<T, McError>;
