//! Population quasi-likelihood H and the divergence Y between candidate
//! covariances.

use crate::covariance::{assemble_sigma, CovarianceMatrix};
use crate::error::Result;
use crate::model::{ModelSpec, Theta};

/// Y(θ; θ₀) = −½·tr(Σ(θ)⁻¹Σ(θ₀) − I) − ½·log(det Σ(θ)/det Σ(θ₀)).
///
/// This is −KL(N(0, Σ(θ₀)) ‖ N(0, Σ(θ))): zero at Σ(θ) = Σ(θ₀) and strictly
/// negative otherwise. Computed via Cholesky solves and Cholesky
/// log-determinants; no explicit inverse or raw determinant.
pub fn y_function(spec: &ModelSpec, theta: &Theta, theta0: &Theta) -> Result<f64> {
    let sigma = assemble_sigma(spec, theta)?;
    let sigma0 = assemble_sigma(spec, theta0)?;
    let p = sigma.p() as f64;
    let tr = sigma.solve(sigma0.matrix()).trace();
    Ok(-0.5 * (tr - p) - 0.5 * (sigma.log_det() - sigma0.log_det()))
}

/// Population quasi-likelihood H(θ; Σ₀) = −½·tr(Σ(θ)⁻¹Σ₀) − ½·log det Σ(θ).
pub fn population_h(spec: &ModelSpec, theta: &Theta, sigma0: &CovarianceMatrix) -> Result<f64> {
    let sigma = assemble_sigma(spec, theta)?;
    let tr = sigma.solve(sigma0.matrix()).trace();
    Ok(-0.5 * tr - 0.5 * sigma.log_det())
}
