//! Asymptotic information machinery: W, Δ, I, and the numeric
//! identifiability check.

use nalgebra::{Cholesky, DMatrix};

use crate::covariance::assemble_sigma;
use crate::derivatives::sigma_jacobian;
use crate::error::{Result, SemError};
use crate::model::{ModelSpec, Theta};
use crate::vech::duplication_pinv;

/// Jacobian Δ, weight matrix W, information matrix I = ΔᵀW⁻¹Δ, and the
/// numerical rank of Δ.
#[derive(Debug, Clone)]
pub struct AsymptoticInfo {
    /// Δ = ∂ vech Σ / ∂θᵀ (p̄×q).
    pub jacobian: DMatrix<f64>,
    /// W = 2𝔻_p⁺(Σ⊗Σ)𝔻_p⁺ᵀ (p̄×p̄).
    pub w: DMatrix<f64>,
    /// I = ΔᵀW⁻¹Δ (q×q).
    pub info: DMatrix<f64>,
    /// Numerical rank of Δ (singular values above p̄·ε·σ_max).
    pub rank: usize,
}

/// Numerical rank from singular values with tolerance p̄·machine-ε·σ_max.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let svals = m.singular_values();
    let sigma_max = svals.max();
    if sigma_max == 0.0 {
        return 0;
    }
    let tol = m.nrows().max(m.ncols()) as f64 * f64::EPSILON * sigma_max;
    svals.iter().filter(|s| **s > tol).count()
}

/// W(θ) from the Kronecker formula (exactly symmetrized).
pub fn w_matrix(sigma: &DMatrix<f64>) -> DMatrix<f64> {
    let p = sigma.nrows();
    let pinv = duplication_pinv(p);
    let kron = sigma.kronecker(sigma);
    let mut w = 2.0 * &pinv * kron * pinv.transpose();
    for j in 0..w.ncols() {
        for i in (j + 1)..w.nrows() {
            let s = 0.5 * (w[(i, j)] + w[(j, i)]);
            w[(i, j)] = s;
            w[(j, i)] = s;
        }
    }
    w
}

/// Compute Δ, W, I, and rank(Δ) at θ.
pub fn asymptotic_info(spec: &ModelSpec, theta: &Theta) -> Result<AsymptoticInfo> {
    let sigma = assemble_sigma(spec, theta)?;
    let jacobian = sigma_jacobian(spec, theta)?;
    let w = w_matrix(sigma.matrix());
    let chol = Cholesky::new(w.clone()).ok_or(SemError::NotPositiveDefinite)?;
    let winv_delta = chol.solve(&jacobian);
    let mut info = jacobian.transpose() * winv_delta;
    for j in 0..info.ncols() {
        for i in (j + 1)..info.nrows() {
            let s = 0.5 * (info[(i, j)] + info[(j, i)]);
            info[(i, j)] = s;
            info[(j, i)] = s;
        }
    }
    let rank = numerical_rank(&jacobian);
    Ok(AsymptoticInfo { jacobian, w, info, rank })
}

/// Result of the local identifiability check at θ₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentifiabilityReport {
    pub rank: usize,
    pub q: usize,
    pub is_identified: bool,
}

/// Local numerical surrogate for identifiability: rank Δ(θ₀) = q.
///
/// This does not prove global injectivity of θ ↦ Σ(θ); it is the standard
/// rank condition evaluated numerically.
pub fn check_identifiability(spec: &ModelSpec, theta0: &Theta) -> Result<IdentifiabilityReport> {
    let info = asymptotic_info(spec, theta0)?;
    Ok(IdentifiabilityReport {
        rank: info.rank,
        q: spec.q(),
        is_identified: info.rank == spec.q(),
    })
}
