use thiserror::Error;

/// Errors raised by model construction and covariance algebra.
#[derive(Debug, Error)]
pub enum SemError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The structural matrix I - B is not invertible at working precision,
    /// which signals an invalid parameter point.
    #[error("I - B is singular at the supplied parameter point")]
    SingularPsi,

    /// Cholesky factorization failed, which signals a parameter point
    /// outside the admissible positive-definite region.
    #[error("model-implied covariance is not positive definite")]
    NotPositiveDefinite,

    #[error("matrix is not symmetric (relative asymmetry {max_rel:.3e} exceeds {tol:.3e})")]
    NotSymmetric { max_rel: f64, tol: f64 },

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter vector: {0}")]
    InvalidTheta(String),

    /// Finite-difference probing kept failing even at the smallest step.
    #[error("derivative step shrank to {floor:.3e} without a valid covariance evaluation")]
    DerivativeStepExhausted { floor: f64 },

    #[error("failed to parse model document: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, SemError>;
