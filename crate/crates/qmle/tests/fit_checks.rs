//! End-to-end fits on simulated paths: the simulation-study protocol on
//! the 26-parameter candidate, multi-start stability, and a first
//! selection sanity check.

use jump_sim::{benchmark_true_model, simulate_observations, toy_true_model, SamplingDesign};
use qmle::{fit, make_increments, select, FitOptions, JumpFilterConfig};
use sem_core::presets::{model1, model2, model3, theta1_0, theta2_0, toy2_spec};

#[test]
fn model1_fit_at_truth_recovers_the_first_loading() {
    let tm = benchmark_true_model();
    let design = SamplingDesign { n: 10_000, t: 1.0, euler_substeps: 10, seed: 60_601 };
    let path = simulate_observations(&tm, &design).unwrap();
    let inc = make_increments(&path.x, path.h, &JumpFilterConfig::standard()).unwrap();

    let spec = model1();
    let opts = FitOptions { initial: Some(theta1_0()), ..FitOptions::default() };
    let result = fit(&inc, &spec, &opts).unwrap();

    assert!(result.converged, "gradient norm {}", result.grad_norm);
    assert!(result.iterations <= 200, "took {} iterations", result.iterations);
    // First free loading: replicate-level values scatter around 0.500 with
    // Monte Carlo standard deviation 0.018 at this sample size.
    let lam = result.theta_hat[0];
    assert!(
        (lam - 0.500).abs() <= 3.0 * 0.018,
        "first loading {lam} strays from 0.500"
    );
    assert_eq!(result.q, 26);
    assert_eq!(result.qaic, -2.0 * result.h_value + 2.0 * 26.0);
}

#[test]
fn five_distinct_starts_reach_the_same_height() {
    let tm = toy_true_model();
    let design = SamplingDesign { n: 10_000, t: 1.0, euler_substeps: 10, seed: 505 };
    let path = simulate_observations(&tm, &design).unwrap();
    let inc = make_increments(&path.x, path.h, &JumpFilterConfig::standard()).unwrap();

    let spec = toy2_spec();
    let mut h_values = Vec::new();
    for seed in 1..=5u64 {
        let opts = FitOptions { starts: 1, start_seed: seed, ..FitOptions::default() };
        let result = fit(&inc, &spec, &opts).unwrap();
        assert!(result.converged, "start seed {seed} failed to converge");
        h_values.push(result.h_value);
    }
    let lo = h_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = h_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(hi - lo <= 1e-6, "H spread {} across starts {h_values:?}", hi - lo);
}

#[test]
fn misspecified_candidate_never_wins_on_one_replicate() {
    let tm = benchmark_true_model();
    let design = SamplingDesign { n: 10_000, t: 1.0, euler_substeps: 10, seed: 8_135 };
    let path = simulate_observations(&tm, &design).unwrap();
    let inc = make_increments(&path.x, path.h, &JumpFilterConfig::standard()).unwrap();

    let candidates = [
        (model1(), theta1_0()),
        (model2(), theta2_0()),
        (model3(), model3().truth_theta().unwrap().as_slice().to_vec()),
    ];
    let fits: Vec<_> = candidates
        .iter()
        .map(|(spec, truth)| {
            let opts = FitOptions { initial: Some(truth.clone()), ..FitOptions::default() };
            fit(&inc, spec, &opts).unwrap()
        })
        .collect();
    let qaic3 = fits[2].qaic;
    assert!(qaic3 > fits[0].qaic, "misspecified QAIC {qaic3} beat the true model");
    assert!(qaic3 > fits[1].qaic, "misspecified QAIC {qaic3} beat the nesting model");

    let report = select(fits).unwrap();
    assert!(report.selected_index < 2, "selected the misspecified candidate");
}
