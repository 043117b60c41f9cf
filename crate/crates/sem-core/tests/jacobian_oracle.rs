//! Richardson-extrapolated Jacobian against a plain forward difference.

use nalgebra::DMatrix;
use sem_core::{assemble_sigma, presets, sigma_jacobian, vech, ModelSpec, Theta};

fn forward_difference(spec: &ModelSpec, theta: &[f64], step: f64) -> DMatrix<f64> {
    let base = vech(
        assemble_sigma(spec, &Theta::from_vec(theta.to_vec()))
            .unwrap()
            .matrix(),
    )
    .unwrap();
    let mut jac = DMatrix::zeros(base.len(), theta.len());
    for j in 0..theta.len() {
        let mut plus = theta.to_vec();
        plus[j] += step;
        let shifted = vech(
            assemble_sigma(spec, &Theta::from_vec(plus)).unwrap().matrix(),
        )
        .unwrap();
        jac.set_column(j, &((shifted - &base) / step));
    }
    jac
}

fn check_model(spec: &ModelSpec, theta: Vec<f64>) {
    let jac = sigma_jacobian(spec, &Theta::from_vec(theta.clone())).unwrap();
    let fd = forward_difference(spec, &theta, 1e-5);
    for j in 0..spec.q() {
        let col = jac.column(j);
        let scale = col.abs().max().max(1.0);
        let diff = (col - fd.column(j)).abs().max();
        assert!(
            diff <= 1e-4 * scale,
            "column {j}: diff {diff} exceeds 1e-4 x {scale}"
        );
    }
}

#[test]
fn jacobian_matches_forward_difference_for_all_bundled_models() {
    check_model(&presets::model1(), presets::theta1_0());
    check_model(&presets::model2(), presets::theta2_0());
    let m3 = presets::model3();
    let tbar = m3.truth.clone().expect("bundled pseudo-true value");
    check_model(&m3, tbar);
}
