//! Maximization of the thresholded quasi-likelihood over one candidate
//! model, and the population analogue used for pseudo-true parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sem_core::{CovarianceMatrix, ModelSpec, Theta};
use serde::Serialize;

use crate::bfgs::{minimize, BfgsOptions, BfgsOutcome};
use crate::error::{QmleError, Result};
use crate::filter::IncrementSet;
use crate::loglik::{h_and_grad, QuadStats};
use crate::select::qaic;
use crate::transform::BranchTransform;

/// Optimizer policy for one fit.
#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Number of random starts when no initial value is supplied.
    pub starts: usize,
    /// BFGS iteration cap per start.
    pub max_iter: usize,
    /// Relative gradient tolerance in transformed coordinates.
    pub grad_tol_rel: f64,
    /// Optional starting parameter (single start at this point); the
    /// simulation-study protocol passes the true parameter here.
    pub initial: Option<Vec<f64>>,
    /// Seed for the random-start generator.
    pub start_seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            starts: 8,
            max_iter: 500,
            grad_tol_rel: 1e-8,
            initial: None,
            start_seed: 0,
        }
    }
}

/// Outcome of maximizing H over one candidate.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    /// Maximizer θ̂.
    pub theta_hat: Vec<f64>,
    /// H(θ̂) — the quasi-log-likelihood at the maximizer.
    #[serde(rename = "h")]
    pub h_value: f64,
    /// −2·H(θ̂) + 2q.
    pub qaic: f64,
    /// Parameter count q.
    pub q: usize,
    /// Gradient test met in transformed coordinates.
    pub converged: bool,
    /// BFGS iterations of the reported run.
    pub iterations: usize,
    /// Final transformed-space gradient norm of the reported run.
    pub grad_norm: f64,
    /// Kept increments behind this fit.
    pub n_kept: usize,
    /// Optimizer starts attempted.
    pub starts: usize,
}

/// Draw a start uniformly from the central 50% of a uniformly chosen
/// branch of every coordinate's bounds.
fn random_start(spec: &ModelSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..spec.q())
        .map(|j| {
            let branches = spec.bounds.get(j).branches();
            let iv = branches[rng.random_range(0..branches.len())];
            let w = iv.hi - iv.lo;
            iv.lo + w * (0.25 + 0.5 * rng.random::<f64>())
        })
        .collect()
}

struct RunOutcome {
    theta: Vec<f64>,
    outcome: BfgsOutcome,
}

/// Run the optimizer from every start and keep the best maximizer.
fn maximize_over_starts(
    stats: &QuadStats,
    spec: &ModelSpec,
    opts: &FitOptions,
) -> Result<(RunOutcome, usize)> {
    let starts: Vec<Vec<f64>> = match &opts.initial {
        Some(init) => {
            if init.len() != spec.q() {
                return Err(QmleError::InvalidInput(format!(
                    "initial parameter has length {}, model has q = {}",
                    init.len(),
                    spec.q()
                )));
            }
            vec![init.clone()]
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.start_seed);
            (0..opts.starts.max(1)).map(|_| random_start(spec, &mut rng)).collect()
        }
    };
    let n_starts = starts.len();
    let bfgs_opts = BfgsOptions { max_iter: opts.max_iter, grad_tol_rel: opts.grad_tol_rel };

    let mut best: Option<RunOutcome> = None;
    for start in &starts {
        let transform = BranchTransform::for_start(&spec.bounds, start)?;
        let eval = |u: &[f64]| -> Option<(f64, Vec<f64>)> {
            let theta = Theta::from_vec(transform.to_theta(u));
            let (h, grad_theta) = h_and_grad(stats, spec, &theta).ok()?;
            if !h.is_finite() {
                return None;
            }
            let du = transform.dtheta_du(u);
            let g: Vec<f64> =
                grad_theta.iter().zip(&du).map(|(gt, d)| -gt * d).collect();
            Some((-h, g))
        };
        let u0 = transform.to_unconstrained(start);
        let Some(outcome) = minimize(eval, &u0, &bfgs_opts) else {
            continue; // this start was outside the admissible region
        };
        let theta = transform.to_theta(&outcome.x);
        let candidate = RunOutcome { theta, outcome };
        let better = match &best {
            None => true,
            Some(b) => match (candidate.outcome.converged, b.outcome.converged) {
                (true, false) => true,
                (false, true) => false,
                _ => candidate.outcome.f < b.outcome.f,
            },
        };
        if better {
            best = Some(candidate);
        }
    }

    match best {
        Some(b) => Ok((b, n_starts)),
        None => Err(QmleError::AllStartsFailed { starts: n_starts }),
    }
}

/// Maximize the thresholded quasi-likelihood over `spec`'s parameter space.
pub fn fit(inc: &IncrementSet, spec: &ModelSpec, opts: &FitOptions) -> Result<FitResult> {
    if inc.n_kept == 0 {
        return Err(QmleError::NoKeptIncrements { threshold: inc.threshold });
    }
    if inc.p() != spec.dims.p1 + spec.dims.p2 {
        return Err(QmleError::InvalidInput(format!(
            "data dimension {} does not match the model's p = {}",
            inc.p(),
            spec.dims.p1 + spec.dims.p2
        )));
    }
    let stats = QuadStats::from_increments(inc);
    let (best, n_starts) = maximize_over_starts(&stats, spec, opts)?;
    let h_value = -best.outcome.f;
    Ok(FitResult {
        theta_hat: best.theta,
        h_value,
        qaic: qaic(h_value, spec.q()),
        q: spec.q(),
        converged: best.outcome.converged,
        iterations: best.outcome.iterations,
        grad_norm: best.outcome.grad_norm,
        n_kept: inc.n_kept,
        starts: n_starts,
    })
}

/// Population-level fit against a fixed covariance Σ₀.
#[derive(Debug, Clone)]
pub struct PopulationFit {
    /// Maximizer θ̄ of the population criterion.
    pub theta_bar: Vec<f64>,
    /// h_pop(θ̄) = −½·tr(Σ(θ̄)⁻¹Σ₀) − ½·log det Σ(θ̄).
    pub h_value: f64,
    /// Gradient test met.
    pub converged: bool,
}

/// Maximize the population criterion h_pop(θ) over the parameter space;
/// for a correctly specified model this recovers the data-generating
/// parameter, otherwise the pseudo-true parameter.
pub fn population_fit(
    spec: &ModelSpec,
    sigma0: &CovarianceMatrix,
    opts: &FitOptions,
) -> Result<PopulationFit> {
    let stats = QuadStats::population(sigma0);
    let (best, _) = maximize_over_starts(&stats, spec, opts)?;
    Ok(PopulationFit {
        theta_bar: best.theta,
        h_value: -best.outcome.f,
        converged: best.outcome.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::{make_increments, JumpFilterConfig};
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use sem_core::presets::scalar_spec;

    fn scalar_data(target: f64, n: usize, h: f64) -> DMatrix<f64> {
        // Deterministic increments with sum of squares = target * h * n.
        let step = (target * h).sqrt();
        let mut x = DMatrix::zeros(n + 1, 1);
        for i in 1..=n {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            x[(i, 0)] = x[(i - 1, 0)] + sign * step;
        }
        x
    }

    #[test]
    fn scalar_fit_recovers_the_closed_form() {
        let spec = scalar_spec();
        let x = scalar_data(0.64, 400, 1e-3);
        let inc = make_increments(&x, 1e-3, &JumpFilterConfig::standard()).unwrap();
        assert_eq!(inc.n_kept, 400);
        let fit_res = fit(&inc, &spec, &FitOptions::default()).unwrap();
        assert!(fit_res.converged);
        assert_relative_eq!(fit_res.theta_hat[0], 0.64, epsilon = 1e-6);
        assert_eq!(fit_res.qaic, -2.0 * fit_res.h_value + 2.0);
    }

    #[test]
    fn initial_value_gives_a_single_start() {
        let spec = scalar_spec();
        let x = scalar_data(0.64, 100, 1e-3);
        let inc = make_increments(&x, 1e-3, &JumpFilterConfig::standard()).unwrap();
        let opts = FitOptions { initial: Some(vec![0.5]), ..FitOptions::default() };
        let fit_res = fit(&inc, &spec, &opts).unwrap();
        assert_eq!(fit_res.starts, 1);
        assert!(fit_res.converged);
        assert_relative_eq!(fit_res.theta_hat[0], 0.64, epsilon = 1e-6);
    }

    #[test]
    fn empty_kept_set_is_an_error() {
        let spec = scalar_spec();
        // Huge increments at tiny threshold: everything filtered.
        let mut x = DMatrix::zeros(4, 1);
        for i in 1..4 {
            x[(i, 0)] = i as f64 * 10.0;
        }
        let inc = make_increments(&x, 1e-3, &JumpFilterConfig::standard()).unwrap();
        assert_eq!(inc.n_kept, 0);
        match fit(&inc, &spec, &FitOptions::default()) {
            Err(QmleError::NoKeptIncrements { threshold }) => {
                assert!((threshold - 0.630_957_344_480_193_2).abs() < 1e-12)
            }
            other => panic!("expected NoKeptIncrements, got {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let spec = scalar_spec();
        let x = DMatrix::zeros(5, 2);
        let inc = make_increments(&x, 1e-3, &JumpFilterConfig::standard()).unwrap();
        assert!(matches!(
            fit(&inc, &spec, &FitOptions::default()),
            Err(QmleError::InvalidInput(_))
        ));
    }
}
