//! Bundled data-generating systems used by the simulation study and the
//! small calibration experiments.

use nalgebra::DMatrix;

use crate::observe::TrueModelSpec;
use crate::sde::{Drift, JumpComponent, JumpSpec, SdeSpec, SizeDist};

/// The bundled 12-dimensional true model (JSON source).
pub const TRUE_MODEL_JSON: &str = include_str!("../configs/true_model.json");

/// The 12-dimensional data-generating system of the simulation study:
/// one common factor, four first-block observables, eight second-block
/// observables, two structural factors, all with OU drifts and
/// compound-Poisson jumps.
pub fn benchmark_true_model() -> TrueModelSpec {
    let tm: TrueModelSpec =
        serde_json::from_str(TRUE_MODEL_JSON).expect("bundled true model parses");
    tm.validate().expect("bundled true model is valid");
    tm
}

fn ou(dim: usize, rates: &[f64], vols: &[f64], x0: &[f64], jumps: Vec<JumpComponent>) -> SdeSpec {
    SdeSpec {
        dim,
        x0: x0.to_vec(),
        drift: Drift::Affine { rate: rates.to_vec(), mean: vec![0.0; dim] },
        s: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(vols)),
        jumps: JumpSpec::PerCoordinate(jumps),
    }
}

fn normal_jump(lambda: f64, mean: f64, var: f64) -> JumpComponent {
    JumpComponent { lambda, dist: SizeDist::Normal { mean, var } }
}

/// A one-dimensional observable system: X = ξ with ξ an OU process with
/// volatility 0.8 (so Σ₀ = 0.64) plus rare large jumps N(3, 0.5) at
/// intensity 1. The measurement noise δ is identically zero.
pub fn scalar_true_model() -> TrueModelSpec {
    let xi = SdeSpec {
        dim: 1,
        x0: vec![0.0],
        drift: Drift::Affine { rate: vec![1.0], mean: vec![0.0] },
        s: DMatrix::from_element(1, 1, 0.8),
        jumps: JumpSpec::PerCoordinate(vec![normal_jump(1.0, 3.0, 0.5)]),
    };
    let delta = SdeSpec {
        dim: 1,
        x0: vec![0.0],
        drift: Drift::Affine { rate: vec![0.0], mean: vec![0.0] },
        s: DMatrix::zeros(1, 1),
        jumps: JumpSpec::PerCoordinate(vec![JumpComponent::none()]),
    };
    TrueModelSpec {
        xi,
        delta,
        eps: SdeSpec::empty(),
        zeta: SdeSpec::empty(),
        lambda1: DMatrix::from_element(1, 1, 1.0),
        lambda2: DMatrix::zeros(0, 0),
        b: DMatrix::zeros(0, 0),
        gamma: DMatrix::zeros(0, 1),
    }
}

/// A two-dimensional observable system matching the bundled two-parameter
/// candidate: X = (1,1)ᵀξ + δ with Σ_ξξ = 0.64, Σ_δδ = diag(0.36, 0.25).
/// ξ carries unit-rate N(0,1) jumps; δ is continuous.
pub fn toy_true_model() -> TrueModelSpec {
    let xi = SdeSpec {
        dim: 1,
        x0: vec![0.0],
        drift: Drift::Affine { rate: vec![1.0], mean: vec![0.0] },
        s: DMatrix::from_element(1, 1, 0.8),
        jumps: JumpSpec::PerCoordinate(vec![normal_jump(1.0, 0.0, 1.0)]),
    };
    let delta = ou(
        2,
        &[2.0, 3.0],
        &[0.6, 0.5],
        &[0.0, 0.0],
        vec![JumpComponent::none(), JumpComponent::none()],
    );
    TrueModelSpec {
        xi,
        delta,
        eps: SdeSpec::empty(),
        zeta: SdeSpec::empty(),
        lambda1: DMatrix::from_column_slice(2, 1, &[1.0, 1.0]),
        lambda2: DMatrix::zeros(0, 0),
        b: DMatrix::zeros(0, 0),
        gamma: DMatrix::zeros(0, 1),
    }
}
