//! Campaign artifacts: `rows.csv` (one line per replicate × candidate) and
//! `summary.json` (aggregates + config echo + wall time).
//!
//! `rows.csv` is a pure function of the campaign config — floats are
//! printed with 17 significant digits (`{:.16e}`), so identical configs
//! yield byte-identical files. `summary.json` additionally records the
//! wall time, so only its deterministic fields are comparable across runs.

use std::io::Write;

use serde::Serialize;

use crate::campaign::{McReport, ReplicateRow};
use crate::config::CampaignConfig;
use crate::error::Result;

/// Header of `rows.csv`; `theta_hat...` stands for one column per
/// component of the candidate's parameter vector, so rows of different
/// candidates may have different widths.
pub const ROWS_CSV_HEADER: &str = "rep,seed,model_id,theta_hat...,h,qaic,converged,selected";

fn push_float(line: &mut String, x: f64) {
    line.push_str(&format!("{x:.16e}"));
}

/// Render one row in the fixed column layout.
fn push_row(out: &mut String, row: &ReplicateRow) {
    out.push_str(&format!("{},{},{}", row.rep, row.seed, row.model_id));
    for x in &row.theta_hat {
        out.push(',');
        push_float(out, *x);
    }
    out.push(',');
    push_float(out, row.h_value);
    out.push(',');
    push_float(out, row.qaic);
    out.push_str(if row.converged { ",true" } else { ",false" });
    out.push_str(if row.selected { ",true" } else { ",false" });
    out.push('\n');
}

/// Render the full `rows.csv` document as a string.
pub fn rows_csv_string(rows: &[ReplicateRow]) -> String {
    let mut out = String::with_capacity(128 * (rows.len() + 1));
    out.push_str(ROWS_CSV_HEADER);
    out.push('\n');
    for row in rows {
        push_row(&mut out, row);
    }
    out
}

/// Write `rows.csv` to a writer.
pub fn write_rows_csv<W: Write>(rows: &[ReplicateRow], w: &mut W) -> Result<()> {
    w.write_all(rows_csv_string(rows).as_bytes())?;
    Ok(())
}

/// The `summary.json` document: aggregates, selection counts, the exact
/// config that produced them, and the wall time.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct SummaryDoc<'a> {
    config: &'a CampaignConfig,
    estimator_summary: &'a [crate::campaign::ModelSummary],
    selection_counts: &'a [crate::campaign::SelectionCount],
    replicates_with_selection: usize,
    wall_time_seconds: f64,
}

/// Write `summary.json` (pretty-printed; floats are serialized losslessly,
/// non-finite values as `null`).
pub fn write_summary_json<W: Write>(
    cfg: &CampaignConfig,
    report: &McReport,
    wall_time_seconds: f64,
    w: &mut W,
) -> Result<()> {
    let doc = SummaryDoc {
        config: cfg,
        estimator_summary: &report.estimator_summary,
        selection_counts: &report.selection_counts,
        replicates_with_selection: report.replicates_with_selection,
        wall_time_seconds,
    };
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    w.write_all(b"\n")?;
    Ok(())
}
