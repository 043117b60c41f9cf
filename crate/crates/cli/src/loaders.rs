//! Document ingestion: model, true-model, campaign, parameter-vector, and
//! observation files, with bundled-name shortcuts.

use std::fs;
use std::io::BufReader;
use std::path::Path;

use jump_sim::{ObservationPath, TrueModelSpec};
use mc_harness::CampaignConfig;
use sem_core::ModelSpec;

use crate::errors::{CliResult, Failure};

/// Load a candidate model: `model1`, `model2`, `model3` name the bundled
/// specifications; anything else is a JSON file path.
pub fn load_model(arg: &str) -> CliResult<ModelSpec> {
    let spec = match arg {
        "model1" => sem_core::model1(),
        "model2" => sem_core::model2(),
        "model3" => sem_core::model3(),
        path => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Validation(format!("cannot read model '{path}': {e}")))?;
            let spec: ModelSpec = serde_json::from_str(&text)
                .map_err(|e| Failure::Validation(format!("model '{path}': {e}")))?;
            spec
        }
    };
    spec.validate().map_err(|e| Failure::from(e).context("model validation"))?;
    Ok(spec)
}

/// Load the data-generating system: `benchmark` names the bundled
/// 12-dimensional jump-diffusion system; anything else is a JSON file.
pub fn load_true_model(arg: &str) -> CliResult<TrueModelSpec> {
    let tm = match arg {
        "benchmark" => jump_sim::benchmark_true_model(),
        path => {
            let text = fs::read_to_string(path).map_err(|e| {
                Failure::Validation(format!("cannot read true model '{path}': {e}"))
            })?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Validation(format!("true model '{path}': {e}")))?
        }
    };
    tm.validate().map_err(|e| Failure::from(e).context("true-model validation"))?;
    Ok(tm)
}

/// Load and validate a campaign document.
pub fn load_campaign(path: &str) -> CliResult<CampaignConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("cannot read campaign '{path}': {e}")))?;
    let cfg: CampaignConfig = serde_json::from_str(&text)
        .map_err(|e| Failure::Validation(format!("campaign '{path}': {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Load a parameter vector from a JSON array file.
pub fn load_theta(path: &str) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("cannot read theta '{path}': {e}")))?;
    let theta: Vec<f64> = serde_json::from_str(&text)
        .map_err(|e| Failure::Validation(format!("theta '{path}': {e}")))?;
    Ok(theta)
}

/// Read an observation path from CSV.
pub fn load_data(path: &str) -> CliResult<ObservationPath> {
    let file = fs::File::open(path)
        .map_err(|e| Failure::Validation(format!("cannot open data '{path}': {e}")))?;
    jump_sim::read_csv(BufReader::new(file))
        .map_err(|e| Failure::from(e).context(&format!("data '{path}'")))
}

/// Parse the `--filter D,RHO` override.
pub fn parse_filter(arg: &str) -> CliResult<qmle::JumpFilterConfig> {
    let parts: Vec<&str> = arg.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::Validation(format!(
            "--filter expects 'D,RHO' (e.g. '10,0.4'), got '{arg}'"
        )));
    }
    let d: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| Failure::Validation(format!("--filter D '{}': {e}", parts[0])))?;
    let rho: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| Failure::Validation(format!("--filter RHO '{}': {e}", parts[1])))?;
    qmle::JumpFilterConfig::new(d, rho).map_err(Failure::from)
}

/// Ensure the output directory exists and return it as a path.
pub fn ensure_out_dir(out: &str) -> CliResult<&Path> {
    let dir = Path::new(out);
    fs::create_dir_all(dir)
        .map_err(|e| Failure::Validation(format!("cannot create output dir '{out}': {e}")))?;
    Ok(dir)
}
