//! Error taxonomy for filtering, likelihood evaluation, and fitting.

use sem_core::SemError;
use thiserror::Error;

/// Everything that can go wrong between raw increments and a selection.
#[derive(Debug, Error)]
pub enum QmleError {
    /// The jump filter removed every increment; the quasi-likelihood is
    /// undefined with no surviving data.
    #[error("the jump filter kept no increments (threshold {threshold}); \
             the quasi-likelihood is undefined on an empty sum")]
    NoKeptIncrements { threshold: f64 },

    /// Every optimizer start failed its very first evaluation: the bounds
    /// or the specification place all starts outside the admissible region.
    #[error("all {starts} optimizer starts failed at their initial point")]
    AllStartsFailed { starts: usize },

    /// Model selection received no converged fits to choose from.
    #[error("no converged fits to select from")]
    NoConvergedFits,

    /// Inadmissible filter configuration.
    #[error("invalid jump filter: {0}")]
    InvalidFilter(String),

    /// Dimension or configuration error on the inputs.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Structural error from the covariance machinery.
    #[error(transparent)]
    Core(#[from] SemError),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, QmleError>;
