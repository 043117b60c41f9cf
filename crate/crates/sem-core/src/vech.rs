//! Half-vectorization and duplication-matrix calculus.
//!
//! `vech` stacks the lower triangle of a symmetric p×p matrix column-major
//! into a vector of length p̄ = p(p+1)/2. The duplication matrix 𝔻_p is the
//! p²×p̄ 0/1 matrix with vec M = 𝔻_p vech M for symmetric M, and 𝔻_p⁺ =
//! (𝔻_pᵀ𝔻_p)⁻¹𝔻_pᵀ is its Moore–Penrose inverse.

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, SemError};

/// Position of entry (i, j), i ≥ j, in the vech ordering.
#[inline]
pub fn vech_index(p: usize, i: usize, j: usize) -> usize {
    debug_assert!(i >= j && i < p);
    j * p - j * (j + 1) / 2 + i
}

/// Half-vectorize a symmetric matrix (symmetry checked to relative 1e-12).
pub fn vech(m: &DMatrix<f64>) -> Result<DVector<f64>> {
    let p = m.nrows();
    if m.ncols() != p {
        return Err(SemError::DimensionMismatch(format!(
            "vech needs a square matrix, got {}x{}",
            p,
            m.ncols()
        )));
    }
    let scale = m.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(1.0);
    let mut max_asym = 0.0_f64;
    for j in 0..p {
        for i in (j + 1)..p {
            max_asym = max_asym.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    let rel = max_asym / scale;
    if rel > 1e-12 {
        return Err(SemError::NotSymmetric { max_rel: rel, tol: 1e-12 });
    }
    let mut v = DVector::zeros(p * (p + 1) / 2);
    let mut k = 0;
    for j in 0..p {
        for i in j..p {
            v[k] = m[(i, j)];
            k += 1;
        }
    }
    Ok(v)
}

/// Rebuild the symmetric matrix from its half-vectorization.
pub fn unvech(v: &DVector<f64>) -> Result<DMatrix<f64>> {
    let len = v.len();
    // Solve p(p+1)/2 = len for integer p.
    let p = ((((8 * len + 1) as f64).sqrt() - 1.0) / 2.0).round() as usize;
    if p * (p + 1) / 2 != len {
        return Err(SemError::DimensionMismatch(format!(
            "vector of length {len} is not a triangular number"
        )));
    }
    let mut m = DMatrix::zeros(p, p);
    let mut k = 0;
    for j in 0..p {
        for i in j..p {
            m[(i, j)] = v[k];
            m[(j, i)] = v[k];
            k += 1;
        }
    }
    Ok(m)
}

/// The p²×p̄ duplication matrix 𝔻_p (exact 0/1 entries).
pub fn duplication_matrix(p: usize) -> DMatrix<f64> {
    let p_bar = p * (p + 1) / 2;
    let mut d = DMatrix::zeros(p * p, p_bar);
    for j in 0..p {
        for i in j..p {
            let col = vech_index(p, i, j);
            // vec is column-major: entry (i, j) sits at row i + j·p.
            d[(i + j * p, col)] = 1.0;
            d[(j + i * p, col)] = 1.0;
        }
    }
    d
}

/// The Moore–Penrose inverse 𝔻_p⁺ = (𝔻_pᵀ𝔻_p)⁻¹𝔻_pᵀ.
///
/// 𝔻_pᵀ𝔻_p is diagonal (1 for diagonal positions, 2 for off-diagonal ones),
/// so the inverse is formed exactly by row scaling.
pub fn duplication_pinv(p: usize) -> DMatrix<f64> {
    let d = duplication_matrix(p);
    let mut pinv = d.transpose();
    for j in 0..p {
        for i in (j + 1)..p {
            let row = vech_index(p, i, j);
            for c in 0..p * p {
                pinv[(row, c)] *= 0.5;
            }
        }
    }
    pinv
}
