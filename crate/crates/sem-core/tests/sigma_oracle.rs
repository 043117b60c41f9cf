//! Frozen numeric checks for the model-implied covariance Σ(θ) of the
//! bundled models at their reference parameters.

use approx::assert_relative_eq;
use sem_core::{assemble_sigma, presets, Theta};

/// First row of Σ at the data-generating parameter. Entries are short
/// products of the structural constants, e.g. Σ[0,4] = 0.64·(−0.6)·1.
const SIGMA0_ROW0: [f64; 12] = [
    1.0, 0.32, 0.512, 0.192, -0.384, -0.4992, -0.3072, -0.192, 0.576, 0.5184, 0.4032, 0.6336,
];

#[test]
fn sigma_at_truth_matches_frozen_row() {
    let spec = presets::model1();
    let sigma = assemble_sigma(&spec, &Theta::from_vec(presets::theta1_0())).unwrap();
    let m = sigma.matrix();
    assert_eq!(m.nrows(), 12);
    for (j, want) in SIGMA0_ROW0.iter().enumerate() {
        assert_relative_eq!(m[(0, j)], *want, max_relative = 1e-14);
    }
    // Two diagonal entries assembled through the full endogenous chain:
    // Σ[4,4]  = (0.36·0.64 + 1.96) + 1.69
    // Σ[11,11] = 1.1²·(0.81·0.64 + 0.36) + 1.21
    assert_relative_eq!(m[(4, 4)], 3.8804, max_relative = 1e-14);
    assert_relative_eq!(m[(11, 11)], 2.272864, max_relative = 1e-14);
}

#[test]
fn log_det_at_truth_matches_frozen_value() {
    let spec = presets::model1();
    let sigma = assemble_sigma(&spec, &Theta::from_vec(presets::theta1_0())).unwrap();
    assert_relative_eq!(sigma.log_det(), 0.839_552_264_475_699_19, max_relative = 1e-12);
}

#[test]
fn overparameterized_model_reproduces_sigma_at_its_truth() {
    let s1 = assemble_sigma(&presets::model1(), &Theta::from_vec(presets::theta1_0())).unwrap();
    let s2 = assemble_sigma(&presets::model2(), &Theta::from_vec(presets::theta2_0())).unwrap();
    let diff = (s1.matrix() - s2.matrix()).abs().max();
    assert!(diff < 1e-14, "max entry diff {diff}");
}

#[test]
fn misspecified_model_sigma_at_pseudo_true_matches_frozen_row() {
    let spec = presets::model3();
    let tbar = spec.truth_theta().expect("bundled pseudo-true value");
    let sigma = assemble_sigma(&spec, &tbar).unwrap();
    let m = sigma.matrix();
    // The exogenous block is correctly specified, so its row is unchanged;
    // the cross-block entries move to the single-factor compromise.
    let want = [
        1.0,
        0.32,
        0.512,
        0.192,
        -0.408_376_287_854_777_2,
        -0.526_340_296_491_245_03,
        -0.326_910_171_959_024_83,
        -0.204_203_338_900_431_69,
        0.071_725_071_228_582_765,
        0.064_531_326_217_540_555,
        0.050_974_073_518_559_579,
        0.079_117_623_337_220_541,
    ];
    for (j, w) in want.iter().enumerate() {
        assert_relative_eq!(m[(0, j)], *w, max_relative = 1e-12);
    }
}
