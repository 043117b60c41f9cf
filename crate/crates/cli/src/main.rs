//! `semjd` — SEM for jump diffusions at high frequency: simulate paths,
//! fit candidate models by thresholded quasi-likelihood, select by QAIC,
//! and run Monte Carlo campaigns from committed JSON documents.
//!
//! Exit codes: 0 success, 2 validation error (flags, documents,
//! dimensions), 3 numerical failure (empty filter, non-convergence,
//! singular or non-positive-definite matrices). Logs go to stderr,
//! artifacts to `--out`, tables to stdout.

mod errors;
mod loaders;
mod render;

use std::fs::File;
use std::io::{BufWriter, Write as _};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use jump_sim::SamplingDesign;
use qmle::{fit, make_increments, select, FitOptions, FitResult};
use sem_core::{check_identifiability, Theta};

use errors::{CliResult, Failure};
use loaders::{
    ensure_out_dir, load_campaign, load_data, load_model, load_theta, load_true_model,
    parse_filter,
};

#[derive(Parser)]
#[command(
    name = "semjd",
    version,
    about = "Structural equation models for jump diffusions observed at high frequency",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Starting-point policy for the optimizer.
#[derive(Clone, Copy, Debug, ValueEnum)]
enum Init {
    /// Start at the model's reference parameter (the simulation-study
    /// protocol); requires the model document to carry one.
    Truth,
    /// Multi-start from random interior points of the parameter bounds.
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate an observation path and write it as CSV.
    Simulate {
        /// True-model JSON document, or `benchmark` for the bundled system.
        #[arg(long = "true-model")]
        true_model: String,
        /// Number of observed increments.
        #[arg(long)]
        n: usize,
        /// Horizon T (the step is h = T/n).
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Fine Euler steps per observed increment.
        #[arg(long, default_value_t = 10)]
        substeps: usize,
        /// Path seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for path.csv and design.json.
        #[arg(long, default_value = ".")]
        out: String,
    },
    /// Fit one model on an observed path.
    Fit {
        /// Observation CSV (as written by `simulate`).
        #[arg(long)]
        data: String,
        /// Model JSON document, or `model1`/`model2`/`model3`.
        #[arg(long)]
        model: String,
        /// Jump filter as `D,RHO`.
        #[arg(long, default_value = "10,0.4")]
        filter: String,
        /// Optimizer starting-point policy.
        #[arg(long, value_enum, default_value_t = Init::Random)]
        init: Init,
        /// Random starts when `--init random`.
        #[arg(long, default_value_t = 8)]
        starts: usize,
        /// Seed for the random-start generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for fit.json.
        #[arg(long, default_value = ".")]
        out: String,
    },
    /// Fit several models on one path and select by QAIC.
    Select {
        /// Observation CSV (as written by `simulate`).
        #[arg(long)]
        data: String,
        /// Model documents or bundled names, in comparison order.
        #[arg(long = "models", num_args = 1.., required = true)]
        models: Vec<String>,
        /// Jump filter as `D,RHO`.
        #[arg(long, default_value = "10,0.4")]
        filter: String,
        /// Optimizer starting-point policy.
        #[arg(long, value_enum, default_value_t = Init::Random)]
        init: Init,
        /// Random starts when `--init random`.
        #[arg(long, default_value_t = 8)]
        starts: usize,
        /// Seed for the random-start generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for selection.json.
        #[arg(long, default_value = ".")]
        out: String,
    },
    /// Run a Monte Carlo campaign from a JSON document.
    Mc {
        /// Campaign JSON document.
        #[arg(long)]
        campaign: String,
        /// Override the replicate count.
        #[arg(long)]
        reps: Option<usize>,
        /// Override the number of observed increments.
        #[arg(long)]
        n: Option<usize>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the worker thread count.
        #[arg(long)]
        threads: Option<usize>,
        /// Override the filter level D.
        #[arg(long)]
        d: Option<f64>,
        /// Override the filter exponent RHO.
        #[arg(long)]
        rho: Option<f64>,
        /// Output directory for rows.csv and summary.json.
        #[arg(long, default_value = ".")]
        out: String,
    },
    /// Paired-path experiment estimating the QAIC penalty q.
    Bias {
        /// Campaign JSON document (defines the true model and design).
        #[arg(long)]
        campaign: String,
        /// Candidate id (from the campaign) to fit.
        #[arg(long)]
        model: String,
        /// Override the replicate count.
        #[arg(long)]
        reps: Option<usize>,
        /// Override the worker thread count.
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory for bias.json.
        #[arg(long, default_value = ".")]
        out: String,
    },
    /// Compare the covariance of √n(θ̂ − θ₀) with I(θ₀)⁻¹.
    Normality {
        /// Campaign JSON document (defines the true model and design).
        #[arg(long)]
        campaign: String,
        /// Candidate id (from the campaign) to fit.
        #[arg(long)]
        model: String,
        /// Override the replicate count.
        #[arg(long)]
        reps: Option<usize>,
        /// Override the worker thread count.
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory for normality.json.
        #[arg(long, default_value = ".")]
        out: String,
    },
    /// Numerical identifiability check: rank of the vech-Σ jacobian at θ.
    CheckIdent {
        /// Model JSON document, or `model1`/`model2`/`model3`.
        #[arg(long)]
        model: String,
        /// Parameter vector as a JSON array file; defaults to the model's
        /// reference parameter.
        #[arg(long)]
        theta: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Simulate { true_model, n, t, substeps, seed, out } => {
            run_simulate(&true_model, n, t, substeps, seed, &out)
        }
        Command::Fit { data, model, filter, init, starts, seed, out } => {
            run_fit(&data, &model, &filter, init, starts, seed, &out)
        }
        Command::Select { data, models, filter, init, starts, seed, out } => {
            run_select(&data, &models, &filter, init, starts, seed, &out)
        }
        Command::Mc { campaign, reps, n, seed, threads, d, rho, out } => {
            run_mc(&campaign, reps, n, seed, threads, d, rho, &out)
        }
        Command::Bias { campaign, model, reps, threads, out } => {
            run_bias(&campaign, &model, reps, threads, &out)
        }
        Command::Normality { campaign, model, reps, threads, out } => {
            run_normality(&campaign, &model, reps, threads, &out)
        }
        Command::CheckIdent { model, theta } => run_check_ident(&model, theta.as_deref()),
    }
}

/// Open `dir/name` for buffered writing.
fn create(dir: &Path, name: &str) -> CliResult<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path)
        .map_err(|e| Failure::Validation(format!("cannot create '{}': {e}", path.display())))?;
    Ok(BufWriter::new(file))
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> CliResult<()> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}

fn run_simulate(
    true_model: &str,
    n: usize,
    t: f64,
    substeps: usize,
    seed: u64,
    out: &str,
) -> CliResult<()> {
    let tm = load_true_model(true_model)?;
    let design = SamplingDesign { n, t, euler_substeps: substeps, seed };
    design.validate().map_err(Failure::from)?;
    let path = jump_sim::simulate_observations(&tm, &design).map_err(Failure::from)?;
    let dir = ensure_out_dir(out)?;
    let mut w = create(dir, "path.csv")?;
    jump_sim::write_csv(&path, &mut w).map_err(Failure::from)?;
    w.flush()?;
    #[derive(serde::Serialize)]
    #[serde(rename_all = "camelCase")]
    struct DesignEcho<'a> {
        design: &'a SamplingDesign,
        true_model: &'a str,
    }
    write_json(dir, "design.json", &DesignEcho { design: &design, true_model })?;
    eprintln!(
        "simulated {} increments of {} coordinates; wrote {}/path.csv and {}/design.json",
        path.n(),
        path.p(),
        out,
        out
    );
    Ok(())
}

/// Assemble fit options from the CLI start policy.
fn fit_options(
    model: &sem_core::ModelSpec,
    which: &str,
    init: Init,
    starts: usize,
    seed: u64,
) -> CliResult<FitOptions> {
    let initial = match init {
        Init::Truth => Some(model.truth.clone().ok_or_else(|| {
            Failure::Validation(format!(
                "--init truth: model '{which}' carries no reference parameter; use --init random"
            ))
        })?),
        Init::Random => None,
    };
    Ok(FitOptions { initial, starts, start_seed: seed, ..FitOptions::default() })
}

fn run_fit(
    data: &str,
    model_arg: &str,
    filter_arg: &str,
    init: Init,
    starts: usize,
    seed: u64,
    out: &str,
) -> CliResult<()> {
    let path = load_data(data)?;
    let model = load_model(model_arg)?;
    let filter = parse_filter(filter_arg)?;
    let inc = make_increments(&path.x, path.h, &filter).map_err(Failure::from)?;
    eprintln!(
        "kept {} of {} increments (threshold {})",
        inc.n_kept,
        inc.n(),
        inc.threshold
    );
    let opts = fit_options(&model, model_arg, init, starts, seed)?;
    let result = fit(&inc, &model, &opts).map_err(Failure::from)?;
    print!("{}", render::fit_table(&result));
    let dir = ensure_out_dir(out)?;
    write_json(dir, "fit.json", &result)?;
    eprintln!("wrote {out}/fit.json");
    Ok(())
}

fn run_select(
    data: &str,
    model_args: &[String],
    filter_arg: &str,
    init: Init,
    starts: usize,
    seed: u64,
    out: &str,
) -> CliResult<()> {
    let path = load_data(data)?;
    let filter = parse_filter(filter_arg)?;
    let inc = make_increments(&path.x, path.h, &filter).map_err(Failure::from)?;
    let mut fits: Vec<FitResult> = Vec::with_capacity(model_args.len());
    let mut ids: Vec<String> = Vec::with_capacity(model_args.len());
    for arg in model_args {
        let model = load_model(arg)?;
        let opts = fit_options(&model, arg, init, starts, seed)?;
        let result =
            fit(&inc, &model, &opts).map_err(|e| Failure::from(e).context(&format!("fit '{arg}'")))?;
        ids.push(id_of(arg));
        fits.push(result);
    }
    let report = select(fits).map_err(Failure::from)?;
    print!("{}", render::selection_table(&ids, &report));
    #[derive(serde::Serialize)]
    #[serde(rename_all = "camelCase")]
    struct SelectionDoc<'a> {
        models: &'a [String],
        selected_id: &'a str,
        selection: &'a qmle::SelectionReport,
    }
    let dir = ensure_out_dir(out)?;
    write_json(
        dir,
        "selection.json",
        &SelectionDoc {
            models: &ids,
            selected_id: &ids[report.selected_index],
            selection: &report,
        },
    )?;
    eprintln!("wrote {out}/selection.json");
    Ok(())
}

/// Model label for reports: bundled name as-is, file path by its stem.
fn id_of(arg: &str) -> String {
    match arg {
        "model1" | "model2" | "model3" => arg.to_string(),
        path => Path::new(path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_mc(
    campaign: &str,
    reps: Option<usize>,
    n: Option<usize>,
    seed: Option<u64>,
    threads: Option<usize>,
    d: Option<f64>,
    rho: Option<f64>,
    out: &str,
) -> CliResult<()> {
    let mut cfg = load_campaign(campaign)?;
    if let Some(reps) = reps {
        cfg.reps = reps;
    }
    if let Some(n) = n {
        cfg.design.n = n;
    }
    if let Some(seed) = seed {
        cfg.seed_base = seed;
    }
    if let Some(threads) = threads {
        cfg.threads = threads;
    }
    if d.is_some() || rho.is_some() {
        cfg.filter = qmle::JumpFilterConfig::new(
            d.unwrap_or(cfg.filter.d),
            rho.unwrap_or(cfg.filter.rho),
        )
        .map_err(Failure::from)?;
    }
    cfg.validate()?;
    eprintln!(
        "campaign: {} replicates, n = {}, {} candidate{}, {} thread{}",
        cfg.reps,
        cfg.design.n,
        cfg.candidates.len(),
        if cfg.candidates.len() == 1 { "" } else { "s" },
        cfg.threads,
        if cfg.threads == 1 { "" } else { "s" }
    );
    let started = Instant::now();
    let report = mc_harness::run_campaign(&cfg).map_err(Failure::from)?;
    let wall = started.elapsed().as_secs_f64();
    let dir = ensure_out_dir(out)?;
    let mut w = create(dir, "rows.csv")?;
    mc_harness::write_rows_csv(&report.rows, &mut w).map_err(Failure::from)?;
    w.flush()?;
    let mut w = create(dir, "summary.json")?;
    mc_harness::write_summary_json(&cfg, &report, wall, &mut w).map_err(Failure::from)?;
    w.flush()?;
    print!("{}", render::counts_table(&report));
    print!("{}", render::estimator_tables(&report));
    eprintln!("wrote {out}/rows.csv and {out}/summary.json in {wall:.1}s");
    Ok(())
}

/// Find a candidate's model by id inside a campaign.
fn candidate_model(
    cfg: &mc_harness::CampaignConfig,
    id: &str,
) -> CliResult<sem_core::ModelSpec> {
    cfg.candidates
        .iter()
        .find(|c| c.id == id)
        .map(|c| c.model.clone())
        .ok_or_else(|| {
            let available: Vec<&str> = cfg.candidates.iter().map(|c| c.id.as_str()).collect();
            Failure::Validation(format!(
                "campaign has no candidate '{id}' (available: {})",
                available.join(", ")
            ))
        })
}

fn run_bias(
    campaign: &str,
    model_id: &str,
    reps: Option<usize>,
    threads: Option<usize>,
    out: &str,
) -> CliResult<()> {
    let mut cfg = load_campaign(campaign)?;
    if let Some(threads) = threads {
        cfg.threads = threads;
    }
    let model = candidate_model(&cfg, model_id)?;
    let reps = reps.unwrap_or(cfg.reps);
    let report = mc_harness::qaic_bias_experiment(&cfg, &model, reps).map_err(Failure::from)?;
    print!("{}", render::bias_summary(&report));
    let dir = ensure_out_dir(out)?;
    write_json(dir, "bias.json", &report)?;
    eprintln!("wrote {out}/bias.json");
    Ok(())
}

fn run_normality(
    campaign: &str,
    model_id: &str,
    reps: Option<usize>,
    threads: Option<usize>,
    out: &str,
) -> CliResult<()> {
    let mut cfg = load_campaign(campaign)?;
    if let Some(threads) = threads {
        cfg.threads = threads;
    }
    let model = candidate_model(&cfg, model_id)?;
    let reps = reps.unwrap_or(cfg.reps);
    let report = mc_harness::normality_experiment(&cfg, &model, reps).map_err(Failure::from)?;
    print!("{}", render::normality_summary(&report));
    let dir = ensure_out_dir(out)?;
    write_json(dir, "normality.json", &report)?;
    eprintln!("wrote {out}/normality.json");
    Ok(())
}

fn run_check_ident(model_arg: &str, theta_arg: Option<&str>) -> CliResult<()> {
    let model = load_model(model_arg)?;
    let theta = match theta_arg {
        Some(path) => load_theta(path)?,
        None => model.truth.clone().ok_or_else(|| {
            Failure::Validation(format!(
                "model '{model_arg}' carries no reference parameter; pass --theta FILE"
            ))
        })?,
    };
    if theta.len() != model.q() {
        return Err(Failure::Validation(format!(
            "theta has {} components but the model has q = {}",
            theta.len(),
            model.q()
        )));
    }
    let report =
        check_identifiability(&model, &Theta::from_vec(theta)).map_err(Failure::from)?;
    println!(
        "rank {} / q {}: {}",
        report.rank,
        report.q,
        if report.is_identified { "identified" } else { "rank-deficient" }
    );
    Ok(())
}
