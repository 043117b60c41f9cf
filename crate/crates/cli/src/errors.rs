//! Exit-code classification: configuration problems exit 2, numerical
//! failures exit 3.

use mc_harness::McError;
use qmle::QmleError;
use sem_core::SemError;

/// A rendered failure with its exit class.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or invalid documents, dimension mismatches.
    Validation(String),
    /// The computation itself failed (empty filter, non-convergence,
    /// singular or non-positive-definite matrices).
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Numerical(m) => m,
        }
    }

    /// Attach a context prefix, keeping the exit class.
    pub fn context(self, what: &str) -> Failure {
        match self {
            Failure::Validation(m) => Failure::Validation(format!("{what}: {m}")),
            Failure::Numerical(m) => Failure::Numerical(format!("{what}: {m}")),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

pub fn classify_sem(e: &SemError) -> Failure {
    let msg = e.to_string();
    match e {
        SemError::SingularPsi
        | SemError::NotPositiveDefinite
        | SemError::DerivativeStepExhausted { .. } => Failure::Numerical(msg),
        _ => Failure::Validation(msg),
    }
}

pub fn classify_qmle(e: &QmleError) -> Failure {
    match e {
        QmleError::Core(inner) => classify_sem(inner),
        QmleError::NoKeptIncrements { .. }
        | QmleError::AllStartsFailed { .. }
        | QmleError::NoConvergedFits => Failure::Numerical(e.to_string()),
        _ => Failure::Validation(e.to_string()),
    }
}

pub fn classify_sim(e: &jump_sim::SimError) -> Failure {
    match e {
        jump_sim::SimError::Core(inner) => classify_sem(inner),
        _ => Failure::Validation(e.to_string()),
    }
}

pub fn classify_mc(e: &McError) -> Failure {
    match e {
        McError::Sim(inner) => classify_sim(inner),
        McError::Qmle(inner) => classify_qmle(inner),
        McError::Core(inner) => classify_sem(inner),
        McError::Experiment(_) => Failure::Numerical(e.to_string()),
        _ => Failure::Validation(e.to_string()),
    }
}

impl From<SemError> for Failure {
    fn from(e: SemError) -> Self {
        classify_sem(&e)
    }
}

impl From<QmleError> for Failure {
    fn from(e: QmleError) -> Self {
        classify_qmle(&e)
    }
}

impl From<jump_sim::SimError> for Failure {
    fn from(e: jump_sim::SimError) -> Self {
        classify_sim(&e)
    }
}

impl From<McError> for Failure {
    fn from(e: McError) -> Self {
        classify_mc(&e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Validation(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        // serde_json reports line/column, giving field-level diagnostics.
        Failure::Validation(format!("JSON parse error: {e}"))
    }
}
