//! Monte Carlo harness: replicate campaigns over the jump-diffusion
//! simulator and the quasi-likelihood estimator.
//!
//! A campaign is a single JSON document ([`CampaignConfig`]): the
//! data-generating system, the candidate models, the sampling design, the
//! jump filter, and the replication plan. [`run_campaign`] executes
//! replicate `r` from seed `derive(seedBase, r)` — simulate one path, fit
//! every candidate, select by QAIC — and aggregates estimator moments and
//! selection counts. Replicates are independent work items on a bounded
//! worker pool; the report is a pure function of the config, independent
//! of the thread count.
//!
//! Two theorem-level experiments ride on the same infrastructure:
//! [`qaic_bias_experiment`] (paired independent paths; the mean of
//! H(X, θ̂(X)) − H(Z, θ̂(X)) estimates the parameter count q) and
//! [`normality_experiment`] (sample covariance of √n(θ̂ − θ₀) against
//! I(θ₀)⁻¹).

pub mod campaign;
pub mod config;
pub mod error;
pub mod experiments;
pub mod io;
pub mod presets;

pub use campaign::{run_campaign, summarize, McReport, ModelSummary, ReplicateRow, SelectionCount};
pub use config::{CampaignConfig, Candidate};
pub use error::{McError, Result};
pub use experiments::{
    normality_experiment, qaic_bias_experiment, BiasReport, NormalityReport,
};
pub use io::{rows_csv_string, write_rows_csv, write_summary_json, ROWS_CSV_HEADER};
pub use presets::{
    benchmark_campaign, scalar_campaign, toy_campaign, CAMPAIGN_BENCHMARK_JSON, CAMPAIGN_TOY_JSON,
};
