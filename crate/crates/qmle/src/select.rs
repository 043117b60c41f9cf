//! QAIC and model selection across candidates.

use serde::Serialize;

use crate::error::{QmleError, Result};
use crate::fit::FitResult;

/// QAIC = −2·H(θ̂) + 2q.
pub fn qaic(h_value: f64, q: usize) -> f64 {
    -2.0 * h_value + 2.0 * q as f64
}

/// Outcome of comparing every candidate's QAIC.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionReport {
    /// Per-candidate fits in input order.
    pub fits: Vec<FitResult>,
    /// Index (into `fits`) of the selected model: the smallest QAIC among
    /// converged fits, ties broken by the smallest index.
    pub selected_index: usize,
    /// Optional labels marking which candidates are correctly specified,
    /// for experiment reporting.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correctly_specified: Option<Vec<usize>>,
}

/// Select the QAIC-minimal candidate. Non-converged fits are retained in
/// the report but excluded from the comparison.
pub fn select(fits: Vec<FitResult>) -> Result<SelectionReport> {
    let mut selected: Option<(usize, f64)> = None;
    for (i, f) in fits.iter().enumerate() {
        if !f.converged {
            continue;
        }
        // Strict comparison keeps the earliest index on ties.
        if selected.is_none_or(|(_, best)| f.qaic < best) {
            selected = Some((i, f.qaic));
        }
    }
    match selected {
        Some((idx, _)) => Ok(SelectionReport {
            fits,
            selected_index: idx,
            correctly_specified: None,
        }),
        None => Err(QmleError::NoConvergedFits),
    }
}
