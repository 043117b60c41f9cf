//! The thresholded quasi-(log)likelihood
//!
//! ```text
//! H(θ) = −1/(2h) · Σ_kept ΔXᵀ Σ(θ)⁻¹ ΔX − (nKept/2) · log det Σ(θ)
//! ```
//!
//! and its gradient. Both are also available through the sufficient
//! statistic Q = Σ_kept ΔXΔXᵀ:
//!
//! ```text
//! H(θ) = −1/(2h)·tr(Σ⁻¹Q) − (nKept/2)·log det Σ,
//! ∂ⱼH  = ½·tr(∂ⱼΣ·G),   G = h⁻¹·Σ⁻¹QΣ⁻¹ − nKept·Σ⁻¹,
//! ```
//!
//! which makes the per-evaluation cost independent of n after one pass
//! over the data.

use nalgebra::{DMatrix, DVector};
use sem_core::{assemble_sigma, sigma_jacobian, CovarianceMatrix, ModelSpec, Theta};

use crate::error::Result;
use crate::filter::IncrementSet;

/// Linear-summation block size for the pairwise accumulators.
const PAIRWISE_BLOCK: usize = 32;

/// Sum with pairwise (cascade) splitting for O(√log n) error growth.
fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= PAIRWISE_BLOCK {
        v.iter().sum()
    } else {
        let mid = v.len() / 2;
        pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
    }
}

/// Binary-counter merge for pairwise matrix accumulation: block sums enter
/// at level 0 and equal-size partial sums merge upward deterministically.
fn push_level(levels: &mut Vec<Option<DMatrix<f64>>>, mut m: DMatrix<f64>) {
    let mut i = 0;
    loop {
        if i == levels.len() {
            levels.push(Some(m));
            return;
        }
        match levels[i].take() {
            None => {
                levels[i] = Some(m);
                return;
            }
            Some(prev) => {
                m += prev;
                i += 1;
            }
        }
    }
}

/// The sufficient statistic of the kept increments.
#[derive(Debug, Clone)]
pub struct QuadStats {
    /// Q = Σ_kept ΔXΔXᵀ (p×p, exactly symmetric).
    pub q_mat: DMatrix<f64>,
    /// Observation step h.
    pub h: f64,
    /// Number of kept increments.
    pub n_kept: usize,
}

impl QuadStats {
    /// Accumulate Q over the kept increments with pairwise block summation.
    pub fn from_increments(inc: &IncrementSet) -> Self {
        let p = inc.p();
        let mut levels: Vec<Option<DMatrix<f64>>> = Vec::new();
        let mut block = DMatrix::zeros(p, p);
        let mut in_block = 0usize;
        let mut dx = DVector::zeros(p);
        for i in 0..inc.n() {
            if !inc.kept[i] {
                continue;
            }
            for j in 0..p {
                dx[j] = inc.increments[(i, j)];
            }
            block.ger(1.0, &dx, &dx, 1.0);
            in_block += 1;
            if in_block == PAIRWISE_BLOCK {
                push_level(&mut levels, block);
                block = DMatrix::zeros(p, p);
                in_block = 0;
            }
        }
        if in_block > 0 {
            push_level(&mut levels, block);
        }
        let mut q_mat = DMatrix::zeros(p, p);
        for level in levels.into_iter().flatten() {
            q_mat += level;
        }
        QuadStats { q_mat, h: inc.h, n_kept: inc.n_kept }
    }

    /// Population analogue: Q = Σ₀ with h = 1 and a single "increment",
    /// turning H into the population criterion
    /// h_pop(θ) = −½·tr(Σ(θ)⁻¹Σ₀) − ½·log det Σ(θ).
    pub fn population(sigma0: &CovarianceMatrix) -> Self {
        QuadStats { q_mat: sigma0.matrix().clone(), h: 1.0, n_kept: 1 }
    }
}

/// H(θ) from the sufficient statistic (one Cholesky, one triangular solve).
pub fn quasi_loglik_from_stats(
    stats: &QuadStats,
    spec: &ModelSpec,
    theta: &Theta,
) -> Result<f64> {
    let sigma = assemble_sigma(spec, theta)?;
    Ok(h_of(stats, &sigma))
}

fn h_of(stats: &QuadStats, sigma: &CovarianceMatrix) -> f64 {
    let tr = sigma.solve(&stats.q_mat).trace();
    -tr / (2.0 * stats.h) - 0.5 * stats.n_kept as f64 * sigma.log_det()
}

/// H(θ) by the literal per-increment accumulation: one Cholesky of Σ(θ),
/// one triangular solve per kept increment, quadratic forms combined by
/// pairwise summation.
pub fn quasi_loglik(inc: &IncrementSet, spec: &ModelSpec, theta: &Theta) -> Result<f64> {
    let sigma = assemble_sigma(spec, theta)?;
    let p = inc.p();
    let mut dx = DVector::zeros(p);
    let mut quad_forms = Vec::with_capacity(inc.n_kept);
    for i in 0..inc.n() {
        if !inc.kept[i] {
            continue;
        }
        for j in 0..p {
            dx[j] = inc.increments[(i, j)];
        }
        quad_forms.push(sigma.quad_form(&dx));
    }
    let total = pairwise_sum(&quad_forms);
    Ok(-total / (2.0 * inc.h) - 0.5 * inc.n_kept as f64 * sigma.log_det())
}

/// ∇H(θ) from the sufficient statistic.
pub fn quasi_loglik_grad_from_stats(
    stats: &QuadStats,
    spec: &ModelSpec,
    theta: &Theta,
) -> Result<Vec<f64>> {
    Ok(h_and_grad(stats, spec, theta)?.1)
}

/// ∇H(θ) for an increment set (assembles the sufficient statistic).
pub fn quasi_loglik_grad(inc: &IncrementSet, spec: &ModelSpec, theta: &Theta) -> Result<Vec<f64>> {
    let stats = QuadStats::from_increments(inc);
    quasi_loglik_grad_from_stats(&stats, spec, theta)
}

/// Evaluate H and ∇H sharing one covariance assembly and factorization.
///
/// The gradient contracts the model-covariance Jacobian against
/// G = h⁻¹·Σ⁻¹QΣ⁻¹ − nKept·Σ⁻¹ entry by entry: for symmetric A, B,
/// tr(AB) = Σ_diag A·B + 2·Σ_offdiag A·B, evaluated in vech coordinates.
pub fn h_and_grad(stats: &QuadStats, spec: &ModelSpec, theta: &Theta) -> Result<(f64, Vec<f64>)> {
    let sigma = assemble_sigma(spec, theta)?;
    let h_val = h_of(stats, &sigma);

    let inv = sigma.inverse();
    let g = &inv * &stats.q_mat * &inv / stats.h - stats.n_kept as f64 * &inv;

    let jac = sigma_jacobian(spec, theta)?;
    let p = g.nrows();
    let mut g_weighted = DVector::zeros(p * (p + 1) / 2);
    let mut k = 0;
    for j in 0..p {
        for i in j..p {
            g_weighted[k] = if i == j { g[(i, j)] } else { 2.0 * g[(i, j)] };
            k += 1;
        }
    }
    let grad = 0.5 * jac.transpose() * g_weighted;
    Ok((h_val, grad.iter().copied().collect()))
}
