//! Plain-text tables mirroring the layout of the study's result tables:
//! mean (sd) grids for estimator summaries, count rows for selection.

use mc_harness::{BiasReport, McReport, NormalityReport};
use qmle::{FitResult, SelectionReport};

/// One fitted model: diagnostics line plus the estimate vector.
pub fn fit_table(f: &FitResult) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "H = {:.6}, QAIC = {:.6}, q = {}, kept = {}, converged = {} ({} iterations, {} start{})\n",
        f.h_value,
        f.qaic,
        f.q,
        f.n_kept,
        f.converged,
        f.iterations,
        f.starts,
        if f.starts == 1 { "" } else { "s" },
    ));
    for (j, v) in f.theta_hat.iter().enumerate() {
        out.push_str(&format!("  t{:<3} {:>12.6}\n", j + 1, v));
    }
    out
}

/// QAIC comparison across candidates with the winner marked.
pub fn selection_table(ids: &[String], report: &SelectionReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<12} {:>4} {:>16} {:>16} {:>10} {:>9}\n",
        "model", "q", "H", "QAIC", "converged", "selected"
    ));
    for (i, (id, f)) in ids.iter().zip(&report.fits).enumerate() {
        out.push_str(&format!(
            "{:<12} {:>4} {:>16.4} {:>16.4} {:>10} {:>9}\n",
            id,
            f.q,
            f.h_value,
            f.qaic,
            f.converged,
            if i == report.selected_index { "<==" } else { "" }
        ));
    }
    out
}

/// Estimator moments, one block per candidate: `t<j>  mean (sd)` rows.
pub fn estimator_tables(report: &McReport) -> String {
    let mut out = String::new();
    for s in &report.estimator_summary {
        out.push_str(&format!(
            "{} — mean (sd) over {} converged replicate{}\n",
            s.model_id,
            s.n_converged,
            if s.n_converged == 1 { "" } else { "s" }
        ));
        for (j, (m, sd)) in s.mean.iter().zip(&s.sd).enumerate() {
            out.push_str(&format!("  t{:<3} {:>9.3} ({:.3})\n", j + 1, m, sd));
        }
    }
    out
}

/// Selection counts, one row per candidate.
pub fn counts_table(report: &McReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "selected counts over {} replicate{} with a selection\n",
        report.replicates_with_selection,
        if report.replicates_with_selection == 1 { "" } else { "s" }
    ));
    for c in &report.selection_counts {
        out.push_str(&format!("  {:<12} {:>7}\n", c.model_id, c.count));
    }
    out
}

/// One-paragraph summary of the bias experiment.
pub fn bias_summary(r: &BiasReport) -> String {
    format!(
        "bias estimate = {:.4} (MC stderr {:.4}) against q = {} over {} replicates ({} failed)\n\
         raw pairing   = {:.4} (MC stderr {:.4})\n",
        r.bias_estimate, r.mc_stderr, r.q, r.reps_used, r.reps_failed, r.raw_mean, r.raw_stderr
    )
}

/// One-paragraph summary of the normality experiment.
pub fn normality_summary(r: &NormalityReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "covariance deviation ‖C − I⁻¹‖/‖I⁻¹‖ = {:.4} over {} replicates ({} failed)\n",
        r.max_rel_deviation, r.reps_used, r.reps_failed
    ));
    out.push_str(&format!(
        "means within the 3σ band: {} of {} components\n",
        r.mean_within_band,
        r.mean_u.len()
    ));
    for j in 0..r.mean_u.len().min(8) {
        out.push_str(&format!(
            "  u{:<3} mean {:>9.4}  var {:>9.4}  target {:>9.4}\n",
            j + 1,
            r.mean_u[j],
            r.empirical_cov[j][j],
            r.target_cov[j][j]
        ));
    }
    if r.mean_u.len() > 8 {
        out.push_str(&format!("  ... {} more components\n", r.mean_u.len() - 8));
    }
    out
}
