//! Campaign execution: simulate → fit every candidate → select, replicated
//! over derived seeds, aggregated into estimator and selection summaries.

use jump_sim::{derive, simulate_observations};
use qmle::{fit, make_increments, select, FitOptions, FitResult};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::CampaignConfig;
use crate::error::{McError, Result};

/// One fitted candidate on one replicate: the unit row of `rows.csv`.
///
/// Failed replicates (simulation or estimation error) keep their row with
/// `converged = false`, NaN estimates, and the error message; campaigns
/// never abort on a single bad replicate.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReplicateRow {
    /// Replicate index, 0-based.
    pub rep: usize,
    /// Replicate seed derive(seedBase, rep) — the path and start seeds
    /// derive from this.
    pub seed: u64,
    /// Candidate label.
    pub model_id: String,
    /// Estimate θ̂ (NaN-filled when the fit failed outright).
    pub theta_hat: Vec<f64>,
    /// Quasi-log-likelihood at θ̂.
    pub h_value: f64,
    /// QAIC = −2H(θ̂) + 2q.
    pub qaic: f64,
    /// BFGS convergence flag.
    pub converged: bool,
    /// Whether this candidate won the QAIC comparison on this replicate.
    pub selected: bool,
    /// Failure description when the fit never produced an estimate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Per-candidate moments of θ̂ over converged replicates.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelSummary {
    /// Candidate label.
    pub model_id: String,
    /// Number of converged replicates the moments are taken over.
    pub n_converged: usize,
    /// Componentwise sample mean of θ̂.
    pub mean: Vec<f64>,
    /// Componentwise sample standard deviation (denominator n−1; NaN when
    /// fewer than two converged replicates).
    pub sd: Vec<f64>,
}

/// How often one candidate won the QAIC comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SelectionCount {
    /// Candidate label.
    pub model_id: String,
    /// Replicates on which this candidate was selected.
    pub count: usize,
}

/// Full campaign output: every row plus the aggregates recomputable from
/// the rows.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct McReport {
    /// One row per replicate × candidate, ordered by (rep, candidate).
    pub rows: Vec<ReplicateRow>,
    /// Sample mean / SD of θ̂ per candidate over its converged rows.
    pub estimator_summary: Vec<ModelSummary>,
    /// Selection counts per candidate; they sum to
    /// `replicates_with_selection`.
    pub selection_counts: Vec<SelectionCount>,
    /// Replicates on which at least one candidate converged (the only ones
    /// that can select a model).
    pub replicates_with_selection: usize,
}

/// Run every replicate of the campaign and aggregate.
///
/// Replicate `r` draws its observation path from seed
/// `derive(derive(seedBase, r), 0)` and fits candidate `m` with start seed
/// `derive(derive(seedBase, r), 2 + m)`, so the report is a pure function
/// of the config: any thread count produces identical rows.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<McReport> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| McError::InvalidConfig(format!("thread pool: {e}")))?;
    let per_rep: Vec<Vec<ReplicateRow>> =
        pool.install(|| (0..cfg.reps).into_par_iter().map(|r| run_replicate(cfg, r)).collect());
    let rows: Vec<ReplicateRow> = per_rep.into_iter().flatten().collect();
    let ids: Vec<String> = cfg.candidates.iter().map(|c| c.id.clone()).collect();
    let (estimator_summary, selection_counts) = summarize(&rows, &ids);
    let replicates_with_selection = rows.iter().filter(|r| r.selected).count();
    Ok(McReport { rows, estimator_summary, selection_counts, replicates_with_selection })
}

/// Simulate one path and fit every candidate on it. Never fails: errors
/// become flagged rows.
fn run_replicate(cfg: &CampaignConfig, rep: usize) -> Vec<ReplicateRow> {
    let rep_seed = derive(cfg.seed_base, rep as u64);
    let mut design = cfg.design.clone();
    design.seed = derive(rep_seed, 0);

    let failed = |msg: &str| -> Vec<ReplicateRow> {
        cfg.candidates
            .iter()
            .map(|cand| ReplicateRow {
                rep,
                seed: rep_seed,
                model_id: cand.id.clone(),
                theta_hat: vec![f64::NAN; cand.model.q()],
                h_value: f64::NAN,
                qaic: f64::NAN,
                converged: false,
                selected: false,
                error: Some(msg.to_string()),
            })
            .collect()
    };

    let path = match simulate_observations(&cfg.true_model, &design) {
        Ok(p) => p,
        Err(e) => return failed(&format!("simulation: {e}")),
    };
    let inc = match make_increments(&path.x, path.h, &cfg.filter) {
        Ok(i) => i,
        Err(e) => return failed(&format!("filter: {e}")),
    };

    let mut fits: Vec<std::result::Result<FitResult, String>> = Vec::with_capacity(cfg.candidates.len());
    for (m, cand) in cfg.candidates.iter().enumerate() {
        let opts = FitOptions {
            initial: if cfg.initial_at_truth { cand.model.truth.clone() } else { None },
            start_seed: derive(rep_seed, 2 + m as u64),
            ..FitOptions::default()
        };
        fits.push(fit(&inc, &cand.model, &opts).map_err(|e| e.to_string()));
    }

    // Map the successful fits through the QAIC comparison, then translate
    // the winner's position back to a candidate index.
    let positions: Vec<usize> =
        (0..fits.len()).filter(|&m| fits[m].is_ok()).collect();
    let entered: Vec<FitResult> =
        positions.iter().map(|&m| fits[m].as_ref().expect("filtered Ok").clone()).collect();
    let selected_candidate: Option<usize> = match select(entered) {
        Ok(report) => Some(positions[report.selected_index]),
        Err(_) => None,
    };

    fits.into_iter()
        .zip(&cfg.candidates)
        .enumerate()
        .map(|(m, (outcome, cand))| match outcome {
            Ok(f) => ReplicateRow {
                rep,
                seed: rep_seed,
                model_id: cand.id.clone(),
                theta_hat: f.theta_hat,
                h_value: f.h_value,
                qaic: f.qaic,
                converged: f.converged,
                selected: selected_candidate == Some(m),
                error: None,
            },
            Err(msg) => ReplicateRow {
                rep,
                seed: rep_seed,
                model_id: cand.id.clone(),
                theta_hat: vec![f64::NAN; cand.model.q()],
                h_value: f64::NAN,
                qaic: f64::NAN,
                converged: false,
                selected: false,
                error: Some(msg),
            },
        })
        .collect()
}

/// Two-pass sample mean and SD of θ̂ per candidate over converged rows,
/// plus selection counts, in the given candidate order.
pub fn summarize(rows: &[ReplicateRow], ids: &[String]) -> (Vec<ModelSummary>, Vec<SelectionCount>) {
    let summaries = ids
        .iter()
        .map(|id| {
            let kept: Vec<&ReplicateRow> =
                rows.iter().filter(|r| r.converged && &r.model_id == id).collect();
            let n = kept.len();
            let q = kept.first().map_or(0, |r| r.theta_hat.len());
            let mut mean = vec![0.0f64; q];
            for row in &kept {
                for (acc, x) in mean.iter_mut().zip(&row.theta_hat) {
                    *acc += x;
                }
            }
            for m in &mut mean {
                *m /= n as f64;
            }
            let mut sd = vec![f64::NAN; q];
            if n >= 2 {
                let mut ss = vec![0.0f64; q];
                for row in &kept {
                    for ((acc, x), m) in ss.iter_mut().zip(&row.theta_hat).zip(&mean) {
                        *acc += (x - m) * (x - m);
                    }
                }
                for (s, acc) in sd.iter_mut().zip(&ss) {
                    *s = (acc / (n - 1) as f64).sqrt();
                }
            }
            ModelSummary { model_id: id.clone(), n_converged: n, mean, sd }
        })
        .collect();
    let counts = ids
        .iter()
        .map(|id| SelectionCount {
            model_id: id.clone(),
            count: rows.iter().filter(|r| r.selected && &r.model_id == id).count(),
        })
        .collect();
    (summaries, counts)
}
