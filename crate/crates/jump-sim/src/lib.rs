//! Simulation of latent jump-diffusion factor systems observed at high
//! frequency.
//!
//! The data-generating system consists of four mutually independent latent
//! jump diffusions ξ, δ, ε, ζ driving the observables through
//!
//! ```text
//! X₁ = Λ₁ ξ + δ,     X₂ = Λ₂ η + ε,     η = Ψ⁻¹(Γ ξ + ζ),   Ψ = I − B.
//! ```
//!
//! Paths are generated by Euler–Maruyama on a fine grid (a configurable
//! number of substeps per observed increment) with compound-Poisson jumps
//! aggregated at the end of each fine step, then subsampled to the coarse
//! observation grid. Every random draw comes from a named substream
//! derived from the design's master seed (process × {gaussian, poisson,
//! jump size}), so paths are bit-reproducible and adding jumps to one
//! process never perturbs another's draws.

pub mod error;
pub mod latent;
pub mod observe;
pub mod presets;
pub mod rng;
pub mod sde;

pub use error::{Result, SimError};
pub use latent::{simulate_latent, LatentPath, Stepper};
pub use observe::{
    read_csv, simulate_observations, write_csv, ObservationPath, SamplingDesign, TrueModelSpec,
};
pub use presets::{benchmark_true_model, scalar_true_model, toy_true_model, TRUE_MODEL_JSON};
pub use rng::{derive, NoiseProcess, ProcessStreams};
pub use sde::{Drift, JumpComponent, JumpSpec, SdeSpec, SizeDist};
