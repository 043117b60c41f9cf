//! Structural equation models over latent factor systems: model
//! specifications, implied covariance assembly, derivatives, and
//! identifiability diagnostics.
//!
//! A model splits an observable vector into two blocks driven by exogenous
//! factors ξ and endogenous factors η = Bη + Γξ + ζ:
//!
//! ```text
//! X₁ = Λ₁ξ + δ,   X₂ = Λ₂η + ε,   Ψ = I − B
//! ```
//!
//! which implies the block covariance
//!
//! ```text
//! Σ¹¹ = Λ₁ Σ_ξξ Λ₁ᵀ + Σ_δδ
//! Σ¹² = Λ₁ Σ_ξξ Γᵀ Ψ⁻ᵀ Λ₂ᵀ
//! Σ²² = Λ₂ Ψ⁻¹ (Γ Σ_ξξ Γᵀ + Σ_ζζ) Ψ⁻ᵀ Λ₂ᵀ + Σ_εε
//! ```
//!
//! [`ModelSpec`] declares which entries of the structural matrices are fixed
//! and which are free parameters (with interval-union bounds); [`assemble_sigma`]
//! produces Σ(θ) as a Cholesky-backed [`CovarianceMatrix`]; [`sigma_jacobian`]
//! differentiates vech Σ(θ); [`check_identifiability`] compares the Jacobian
//! rank against q; [`y_function`] and [`population_h`] give the population
//! quasi-likelihood quantities that drive model selection.

pub mod bounds;
pub mod covariance;
pub mod derivatives;
pub mod divergence;
pub mod entries;
pub mod error;
pub mod info;
pub mod model;
pub mod presets;
pub mod vech;

pub use bounds::{Bounds, Interval, IntervalUnion};
pub use covariance::{assemble_sigma, sigma_from_structural, CovarianceMatrix};
pub use derivatives::sigma_jacobian;
pub use divergence::{population_h, y_function};
pub use entries::{EntryMatrix, EntrySpec, SymEntryMatrix};
pub use error::{Result, SemError};
pub use info::{
    asymptotic_info, check_identifiability, numerical_rank, w_matrix, AsymptoticInfo,
    IdentifiabilityReport,
};
pub use model::{invert_psi, materialize, Dimensions, ModelSpec, StructuralMatrices, Theta};
pub use presets::{
    model1, model2, model3, saturated_spec, scalar_spec, theta1_0, theta2_0, toy2_spec,
};
pub use vech::{duplication_matrix, duplication_pinv, unvech, vech, vech_index};
