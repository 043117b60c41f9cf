//! Bundled candidate models and small specifications used across the
//! workspace.
//!
//! The three bundled factor models share one 12-dimensional observable split
//! 4 + 8: the first behaves as the data-generating structure (two endogenous
//! factors, q = 26), the second adds one cross-loading that is truly zero
//! (q = 27), and the third collapses the endogenous factors into one
//! (q = 25, misspecified). Each document carries a reference parameter in
//! `truth`: the data-generating value for the first two, the pseudo-true
//! value (population quasi-likelihood maximizer) for the third.

use crate::bounds::{Bounds, IntervalUnion};
use crate::entries::{EntryMatrix, EntrySpec, SymEntryMatrix};
use crate::model::{Dimensions, ModelSpec};

/// JSON document for the correctly specified two-factor model (q = 26).
pub const MODEL1_JSON: &str = include_str!("../configs/model1.json");
/// JSON document for the over-parameterized two-factor model (q = 27).
pub const MODEL2_JSON: &str = include_str!("../configs/model2.json");
/// JSON document for the misspecified one-factor model (q = 25).
pub const MODEL3_JSON: &str = include_str!("../configs/model3.json");

fn parse(doc: &str, name: &str) -> ModelSpec {
    ModelSpec::from_json(doc)
        .unwrap_or_else(|e| panic!("bundled model document {name} is invalid: {e}"))
}

/// The correctly specified two-factor model (q = 26).
pub fn model1() -> ModelSpec {
    parse(MODEL1_JSON, "model1")
}

/// The two-factor model with one extra (truly zero) cross-loading (q = 27).
pub fn model2() -> ModelSpec {
    parse(MODEL2_JSON, "model2")
}

/// The misspecified one-factor model (q = 25).
pub fn model3() -> ModelSpec {
    parse(MODEL3_JSON, "model3")
}

/// Data-generating parameter of [`model1`].
pub fn theta1_0() -> Vec<f64> {
    vec![
        0.5, 0.8, 0.3, 1.3, 0.8, 0.5, 0.9, 0.7, 1.1, -0.6, 0.9, 0.64, 0.36, 1.44, 0.64, 0.49,
        1.69, 0.25, 0.49, 0.36, 0.81, 0.64, 1.44, 1.21, 1.96, 0.36,
    ]
}

/// Data-generating parameter of [`model2`]: [`theta1_0`] with a zero inserted
/// for the extra cross-loading (index 6).
pub fn theta2_0() -> Vec<f64> {
    let mut t = theta1_0();
    t.insert(6, 0.0);
    t
}

/// One observable, one factor, no measurement error: Σ(θ) = θ₀, q = 1.
pub fn scalar_spec() -> ModelSpec {
    let spec = ModelSpec {
        dims: Dimensions { p1: 1, p2: 0, k1: 1, k2: 0, q: 1 },
        lambda1: EntryMatrix::from_rows(vec![vec![EntrySpec::Fixed(1.0)]]).expect("1x1"),
        lambda2: EntryMatrix::zeros(0, 0),
        b: EntryMatrix::zeros(0, 0),
        gamma: EntryMatrix::zeros(0, 1),
        sigma_xixi: SymEntryMatrix::diagonal(vec![EntrySpec::Free(0)]),
        sigma_deltadelta: SymEntryMatrix::diagonal(vec![EntrySpec::Fixed(0.0)]),
        sigma_epseps: SymEntryMatrix::from_lower(0, vec![]).expect("empty"),
        sigma_zetazeta: SymEntryMatrix::from_lower(0, vec![]).expect("empty"),
        bounds: Bounds(vec![IntervalUnion::single(0.01, 100.0).expect("interval")]),
        truth: Some(vec![0.64]),
    };
    spec.validate().expect("scalar preset is valid");
    spec
}

/// Two observables loading one factor with one free error variance:
/// Σ(θ) = λλᵀθ₀ + diag(θ₁, 0.25) with λ = (1, 1)ᵀ, q = 2.
pub fn toy2_spec() -> ModelSpec {
    let spec = ModelSpec {
        dims: Dimensions { p1: 2, p2: 0, k1: 1, k2: 0, q: 2 },
        lambda1: EntryMatrix::from_rows(vec![
            vec![EntrySpec::Fixed(1.0)],
            vec![EntrySpec::Fixed(1.0)],
        ])
        .expect("2x1"),
        lambda2: EntryMatrix::zeros(0, 0),
        b: EntryMatrix::zeros(0, 0),
        gamma: EntryMatrix::zeros(0, 1),
        sigma_xixi: SymEntryMatrix::diagonal(vec![EntrySpec::Free(0)]),
        sigma_deltadelta: SymEntryMatrix::diagonal(vec![
            EntrySpec::Free(1),
            EntrySpec::Fixed(0.25),
        ]),
        sigma_epseps: SymEntryMatrix::from_lower(0, vec![]).expect("empty"),
        sigma_zetazeta: SymEntryMatrix::from_lower(0, vec![]).expect("empty"),
        bounds: Bounds(vec![
            IntervalUnion::single(0.01, 100.0).expect("interval"),
            IntervalUnion::single(0.01, 100.0).expect("interval"),
        ]),
        truth: Some(vec![0.64, 0.36]),
    };
    spec.validate().expect("toy preset is valid");
    spec
}

/// Saturated model on `p` observables: Λ₁ = I fixed, Σ_ξξ fully free
/// symmetric, Σ_δδ = 0, q = p(p+1)/2. Its population quasi-likelihood
/// maximum over positive-definite Σ is attained at Σ = Σ₀ exactly.
pub fn saturated_spec(p: usize) -> ModelSpec {
    assert!(p >= 1, "saturated model needs p >= 1");
    let eye = EntryMatrix::from_rows(
        (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| EntrySpec::Fixed(if i == j { 1.0 } else { 0.0 }))
                    .collect()
            })
            .collect(),
    )
    .expect("identity layout");
    let q = p * (p + 1) / 2;
    // Lower triangle in vech order; diagonal entries get positive bounds.
    let mut lower = Vec::with_capacity(q);
    let mut bounds = Vec::with_capacity(q);
    let mut k = 0usize;
    for j in 0..p {
        for i in j..p {
            lower.push(EntrySpec::Free(k));
            bounds.push(if i == j {
                IntervalUnion::single(0.01, 100.0).expect("interval")
            } else {
                IntervalUnion::single(-100.0, 100.0).expect("interval")
            });
            k += 1;
        }
    }
    let spec = ModelSpec {
        dims: Dimensions { p1: p, p2: 0, k1: p, k2: 0, q },
        lambda1: eye,
        lambda2: EntryMatrix::zeros(0, 0),
        b: EntryMatrix::zeros(0, 0),
        gamma: EntryMatrix::zeros(0, p),
        sigma_xixi: SymEntryMatrix::from_lower(p, lower).expect("lower triangle"),
        sigma_deltadelta: SymEntryMatrix::from_lower(
            p,
            vec![EntrySpec::Fixed(0.0); q],
        )
        .expect("zero block"),
        sigma_epseps: SymEntryMatrix::from_lower(0, vec![]).expect("empty"),
        sigma_zetazeta: SymEntryMatrix::from_lower(0, vec![]).expect("empty"),
        bounds: Bounds(bounds),
        truth: None,
    };
    spec.validate().expect("saturated preset is valid");
    spec
}
