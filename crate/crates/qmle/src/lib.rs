//! Thresholded quasi-likelihood estimation and QAIC model selection for
//! high-frequency observations of a jump-diffusion factor system.
//!
//! Pipeline: difference the observed path and drop increments whose norm
//! exceeds D·h^ρ ([`make_increments`]), maximize
//!
//! ```text
//! H(θ) = −1/(2h) Σ_kept ΔXᵀΣ(θ)⁻¹ΔX − (nKept/2)·log det Σ(θ)
//! ```
//!
//! over each candidate's bounded parameter space by BFGS in an
//! unconstrained reparameterization ([`fit`]), then pick the candidate
//! minimizing QAIC = −2H(θ̂) + 2q ([`select`]).

pub mod bfgs;
pub mod error;
pub mod filter;
pub mod fit;
pub mod loglik;
pub mod select;
pub mod transform;

pub use bfgs::{minimize, BfgsOptions, BfgsOutcome};
pub use error::{QmleError, Result};
pub use filter::{make_increments, IncrementSet, JumpFilterConfig};
pub use fit::{fit, population_fit, FitOptions, FitResult, PopulationFit};
pub use loglik::{
    h_and_grad, quasi_loglik, quasi_loglik_from_stats, quasi_loglik_grad,
    quasi_loglik_grad_from_stats, QuadStats,
};
pub use select::{qaic, select, SelectionReport};
pub use transform::BranchTransform;
