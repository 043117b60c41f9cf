//! Ready-made campaign configurations: the full simulation study (three
//! candidates on the 12-dimensional system) and two small systems used by
//! the theorem-level experiments.

use jump_sim::{benchmark_true_model, scalar_true_model, toy_true_model, SamplingDesign};
use qmle::JumpFilterConfig;
use sem_core::{model1, model2, model3, scalar_spec, toy2_spec};

use crate::config::{CampaignConfig, Candidate};

/// Bundled campaign document for the full simulation study (n = 10⁴).
pub const CAMPAIGN_BENCHMARK_JSON: &str = include_str!("../configs/campaign_benchmark.json");
/// Bundled campaign document for the two-parameter toy study.
pub const CAMPAIGN_TOY_JSON: &str = include_str!("../configs/campaign_toy.json");

fn design(n: usize) -> SamplingDesign {
    SamplingDesign { n, t: 1.0, euler_substeps: 10, seed: 0 }
}

/// The simulation-study campaign: the 12-dimensional jump-diffusion system
/// with the three candidate models, T = 1, D = 10, ρ = 0.4, every fit
/// started at the candidate's reference parameter.
pub fn benchmark_campaign(n: usize, reps: usize) -> CampaignConfig {
    CampaignConfig {
        true_model: benchmark_true_model(),
        candidates: vec![
            Candidate { id: "model1".into(), model: model1() },
            Candidate { id: "model2".into(), model: model2() },
            Candidate { id: "model3".into(), model: model3() },
        ],
        design: design(n),
        filter: JumpFilterConfig::standard(),
        reps,
        seed_base: 0,
        initial_at_truth: true,
        threads: 1,
    }
}

/// Two-observable toy campaign (single correctly specified candidate with
/// q = 2); used by the bias experiment.
pub fn toy_campaign(n: usize, reps: usize) -> CampaignConfig {
    CampaignConfig {
        true_model: toy_true_model(),
        candidates: vec![Candidate { id: "toy2".into(), model: toy2_spec() }],
        design: design(n),
        filter: JumpFilterConfig::standard(),
        reps,
        seed_base: 0,
        initial_at_truth: true,
        threads: 1,
    }
}

/// Scalar campaign (Σ(θ) = θ, θ₀ = 0.64); used by the normality
/// experiment, where I(θ₀)⁻¹ = 2θ₀².
pub fn scalar_campaign(n: usize, reps: usize) -> CampaignConfig {
    CampaignConfig {
        true_model: scalar_true_model(),
        candidates: vec![Candidate { id: "scalar".into(), model: scalar_spec() }],
        design: design(n),
        filter: JumpFilterConfig::standard(),
        reps,
        seed_base: 0,
        initial_at_truth: true,
        threads: 1,
    }
}
