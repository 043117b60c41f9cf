//! Population quasi-likelihood identities for the bundled models.

use approx::assert_relative_eq;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sem_core::{assemble_sigma, population_h, presets, y_function, Theta};

/// −p/2 − ½·log det Σ₀ with p = 12.
const H_POP_AT_TRUTH: f64 = -6.419_776_132_237_849_7;
/// Population quasi-likelihood of the one-factor model at its pseudo-true
/// parameter (the maximum over its parameter space).
const H_POP_MISSPECIFIED: f64 = -7.011_937_115_044_330_1;

#[test]
fn y_vanishes_at_the_true_parameter() {
    let spec = presets::model1();
    let t0 = Theta::from_vec(presets::theta1_0());
    let y = y_function(&spec, &t0, &t0).unwrap();
    assert!(y.abs() < 1e-12, "Y(theta0; theta0) = {y}");
}

#[test]
fn y_is_strictly_negative_away_from_the_truth() {
    let spec = presets::model1();
    let theta0 = presets::theta1_0();
    let t0 = Theta::from_vec(theta0.clone());
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        // Relative perturbations keep signs, so the point stays in bounds.
        let perturbed: Vec<f64> = theta0
            .iter()
            .map(|v| v * (1.0 + rng.random_range(0.05..0.30) * if rng.random_bool(0.5) { 1.0 } else { -1.0 }))
            .collect();
        let theta = Theta::from_vec(perturbed);
        assert!(theta.in_bounds(&spec));
        let y = y_function(&spec, &theta, &t0).unwrap();
        assert!(y < 0.0, "Y should be negative, got {y}");
    }
}

#[test]
fn population_h_difference_equals_y() {
    let spec = presets::model1();
    let theta0 = presets::theta1_0();
    let t0 = Theta::from_vec(theta0.clone());
    let sigma0 = assemble_sigma(&spec, &t0).unwrap();
    let h0 = population_h(&spec, &t0, &sigma0).unwrap();
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..20 {
        let perturbed: Vec<f64> = theta0.iter().map(|v| v * rng.random_range(0.8..1.2)).collect();
        let theta = Theta::from_vec(perturbed);
        let lhs = population_h(&spec, &theta, &sigma0).unwrap() - h0;
        let rhs = y_function(&spec, &theta, &t0).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12, epsilon = 1e-12);
    }
}

#[test]
fn population_h_values_at_reference_parameters() {
    let m1 = presets::model1();
    let t0 = Theta::from_vec(presets::theta1_0());
    let sigma0 = assemble_sigma(&m1, &t0).unwrap();

    let h1 = population_h(&m1, &t0, &sigma0).unwrap();
    assert_relative_eq!(h1, H_POP_AT_TRUTH, max_relative = 1e-12);

    // The over-parameterized model attains the same maximum at its truth.
    let m2 = presets::model2();
    let h2 = population_h(&m2, &Theta::from_vec(presets::theta2_0()), &sigma0).unwrap();
    assert_relative_eq!(h2, H_POP_AT_TRUTH, max_relative = 1e-12);

    // The misspecified model tops out strictly below.
    let m3 = presets::model3();
    let tbar = m3.truth_theta().expect("bundled pseudo-true value");
    let h3 = population_h(&m3, &tbar, &sigma0).unwrap();
    assert_relative_eq!(h3, H_POP_MISSPECIFIED, max_relative = 1e-10);
    assert!(h3 < h1 - 0.5, "misspecification gap should exceed 0.5");
}
