//! Campaign configuration: the single JSON document that makes a Monte
//! Carlo run reproducible.

use jump_sim::{SamplingDesign, TrueModelSpec};
use qmle::JumpFilterConfig;
use sem_core::ModelSpec;
use serde::{Deserialize, Serialize};

use crate::error::{McError, Result};

/// One candidate model entered into the selection race.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Candidate {
    /// Unique label used in reports and CSV rows.
    pub id: String,
    /// The structural model to fit.
    pub model: ModelSpec,
}

/// Everything a campaign needs: the data-generating system, the candidate
/// models, the sampling design, the jump filter, and the replication plan.
///
/// A campaign is a pure function of this document: replicate `r` draws its
/// path from seed `derive(seedBase, r)`, so reruns (with any thread count)
/// reproduce every row bit for bit.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CampaignConfig {
    /// Data-generating jump-diffusion system.
    pub true_model: TrueModelSpec,
    /// Candidate models, fitted in order on every replicate.
    pub candidates: Vec<Candidate>,
    /// Sampling grid template; its `seed` field is ignored (replicate
    /// seeds are derived from `seedBase`).
    pub design: SamplingDesign,
    /// Increment filter (D, ρ).
    pub filter: JumpFilterConfig,
    /// Number of Monte Carlo replicates.
    pub reps: usize,
    /// Master seed; replicate r uses derive(seedBase, r).
    pub seed_base: u64,
    /// Start every fit at the candidate's reference parameter (the
    /// simulation-study protocol). Requires every candidate to carry one.
    #[serde(default)]
    pub initial_at_truth: bool,
    /// Worker threads for the replicate pool (1 = sequential).
    #[serde(default = "default_threads")]
    pub threads: usize,
}

fn default_threads() -> usize {
    1
}

impl CampaignConfig {
    /// Validate the document before any compute.
    ///
    /// Checks: at least one replicate and one candidate; unique candidate
    /// ids; a valid true model, design, and filter; every candidate
    /// dimensionally compatible with the observed vector; and, when
    /// `initialAtTruth` is set, a reference parameter on every candidate.
    pub fn validate(&self) -> Result<()> {
        if self.reps < 1 {
            return Err(McError::InvalidConfig("reps must be at least 1".into()));
        }
        if self.threads < 1 {
            return Err(McError::InvalidConfig("threads must be at least 1".into()));
        }
        if self.candidates.is_empty() {
            return Err(McError::InvalidConfig("at least one candidate model is required".into()));
        }
        let mut ids: Vec<&str> = self.candidates.iter().map(|c| c.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != self.candidates.len() {
            return Err(McError::InvalidConfig("candidate ids must be unique".into()));
        }
        if self.candidates.iter().any(|c| c.id.is_empty()) {
            return Err(McError::InvalidConfig("candidate ids must be non-empty".into()));
        }
        self.true_model.validate()?;
        self.design.validate()?;
        self.filter.validate().map_err(McError::Qmle)?;
        let p = self.true_model.p();
        for cand in &self.candidates {
            cand.model.validate()?;
            let dims = &cand.model.dims;
            if dims.p1 + dims.p2 != p {
                return Err(McError::InvalidConfig(format!(
                    "candidate '{}' observes {} coordinates but the true model produces {}",
                    cand.id,
                    dims.p1 + dims.p2,
                    p
                )));
            }
            if self.initial_at_truth && cand.model.truth.is_none() {
                return Err(McError::InvalidConfig(format!(
                    "initialAtTruth is set but candidate '{}' has no reference parameter",
                    cand.id
                )));
            }
        }
        Ok(())
    }
}
