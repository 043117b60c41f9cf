//! Model-implied covariance Σ(θ) and its positive-definite wrapper.

use nalgebra::{Cholesky, DMatrix, Dyn};

use crate::error::{Result, SemError};
use crate::model::{materialize, ModelSpec, StructuralMatrices, Theta};

/// A symmetric positive-definite p×p covariance matrix together with its
/// Cholesky factor. Failure to factor is the definition of "outside the
/// admissible region" and surfaces as [`SemError::NotPositiveDefinite`];
/// a silent NaN is never produced.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    matrix: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl CovarianceMatrix {
    /// Wrap a symmetric matrix, checking symmetry (relative 1e-12) and
    /// positive definiteness.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(SemError::DimensionMismatch(format!(
                "covariance must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let scale = matrix.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(1.0);
        let mut max_asym = 0.0_f64;
        for j in 0..matrix.ncols() {
            for i in (j + 1)..matrix.nrows() {
                max_asym = max_asym.max((matrix[(i, j)] - matrix[(j, i)]).abs());
            }
        }
        let rel = max_asym / scale;
        if rel > 1e-12 {
            return Err(SemError::NotSymmetric { max_rel: rel, tol: 1e-12 });
        }
        Self::new_symmetric_unchecked(matrix)
    }

    /// Wrap a matrix that is symmetric by construction.
    pub(crate) fn new_symmetric_unchecked(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(SemError::NotPositiveDefinite);
        }
        let chol = Cholesky::new(matrix.clone()).ok_or(SemError::NotPositiveDefinite)?;
        Ok(Self { matrix, chol })
    }

    pub fn p(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// log det Σ from the Cholesky factor.
    pub fn log_det(&self) -> f64 {
        2.0 * self.chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>()
    }

    /// Σ⁻¹ M via triangular solves.
    pub fn solve(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        self.chol.solve(m)
    }

    /// Σ⁻¹ computed from the Cholesky factor.
    pub fn inverse(&self) -> DMatrix<f64> {
        self.chol.inverse()
    }

    /// Quadratic form xᵀ Σ⁻¹ x via one triangular solve.
    pub fn quad_form(&self, x: &nalgebra::DVector<f64>) -> f64 {
        let mut y = x.clone();
        self.chol.solve_mut(&mut y);
        x.dot(&y)
    }
}

/// Assemble the block covariance implied by already-materialized structural
/// matrices:
///
/// Σ¹¹ = Λ₁ Σ_ξξ Λ₁ᵀ + Σ_δδ
/// Σ¹² = Λ₁ Σ_ξξ Γᵀ Ψ⁻¹ᵀ Λ₂ᵀ
/// Σ²² = Λ₂ Ψ⁻¹ (Γ Σ_ξξ Γᵀ + Σ_ζζ) Ψ⁻¹ᵀ Λ₂ᵀ + Σ_εε
///
/// The result is mirrored from its lower triangle, so it is exactly symmetric.
pub fn sigma_from_structural(sm: &StructuralMatrices) -> Result<CovarianceMatrix> {
    let p1 = sm.lambda1.nrows();
    let p2 = sm.lambda2.nrows();
    let p = p1 + p2;

    let l1_sxx = &sm.lambda1 * &sm.sigma_xixi;
    let sigma11 = &l1_sxx * sm.lambda1.transpose() + &sm.sigma_deltadelta;

    let mut full = DMatrix::zeros(p, p);
    full.view_mut((0, 0), (p1, p1)).copy_from(&sigma11);

    if p2 > 0 {
        // Λ₂ Ψ⁻¹ is shared by both remaining blocks.
        let l2_psi_inv = &sm.lambda2 * &sm.psi_inv;
        let sigma12 = &l1_sxx * sm.gamma.transpose() * l2_psi_inv.transpose();
        let inner = &sm.gamma * &sm.sigma_xixi * sm.gamma.transpose() + &sm.sigma_zetazeta;
        let sigma22 = &l2_psi_inv * inner * l2_psi_inv.transpose() + &sm.sigma_epseps;
        full.view_mut((0, p1), (p1, p2)).copy_from(&sigma12);
        full.view_mut((p1, p1), (p2, p2)).copy_from(&sigma22);
    }

    // Mirror the upper triangle onto the lower so symmetry is exact.
    for j in 0..p {
        for i in (j + 1)..p {
            full[(i, j)] = full[(j, i)];
        }
    }

    CovarianceMatrix::new_symmetric_unchecked(full)
}

/// Model-implied covariance Σ(θ) for a candidate specification.
pub fn assemble_sigma(spec: &ModelSpec, theta: &Theta) -> Result<CovarianceMatrix> {
    let sm = materialize(spec, theta)?;
    sigma_from_structural(&sm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn rejects_asymmetry_and_non_pd() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.2, 1.0]);
        assert!(matches!(
            CovarianceMatrix::new(m),
            Err(SemError::NotSymmetric { .. })
        ));
        let npd = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            CovarianceMatrix::new(npd),
            Err(SemError::NotPositiveDefinite)
        ));
    }

    #[test]
    fn log_det_and_solve_match_direct_computation() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.5]);
        let c = CovarianceMatrix::new(m.clone()).unwrap();
        let det: f64 = 2.0 * 1.5 - 0.09;
        assert_relative_eq!(c.log_det(), det.ln(), max_relative = 1e-14);
        let x = DVector::from_vec(vec![1.0, -1.0]);
        let direct = m.try_inverse().unwrap() * &x;
        let solved = c.solve(&DMatrix::from_column_slice(2, 1, x.as_slice()));
        assert_relative_eq!(solved[(0, 0)], direct[0], max_relative = 1e-12);
        assert_relative_eq!(c.quad_form(&x), x.dot(&direct), max_relative = 1e-12);
    }

    #[test]
    fn decoupled_unit_blocks_give_two_eye() {
        // p1=p2=k1=k2=1, Λ₁=Λ₂=1, Γ=0, B=0, all variances 1 → Σ = diag(2, 2).
        use crate::bounds::{Bounds, IntervalUnion};
        use crate::entries::{EntryMatrix, EntrySpec, SymEntryMatrix};
        use crate::model::Dimensions;
        let one = |v: f64| EntryMatrix::from_rows(vec![vec![EntrySpec::Fixed(v)]]).unwrap();
        let spec = ModelSpec {
            dims: Dimensions { p1: 1, p2: 1, k1: 1, k2: 1, q: 1 },
            lambda1: one(1.0),
            lambda2: one(1.0),
            b: one(0.0),
            gamma: one(0.0),
            sigma_xixi: SymEntryMatrix::diagonal(vec![EntrySpec::Free(0)]),
            sigma_deltadelta: SymEntryMatrix::diagonal(vec![EntrySpec::Fixed(1.0)]),
            sigma_epseps: SymEntryMatrix::diagonal(vec![EntrySpec::Fixed(1.0)]),
            sigma_zetazeta: SymEntryMatrix::diagonal(vec![EntrySpec::Fixed(1.0)]),
            bounds: Bounds(vec![IntervalUnion::single(0.01, 100.0).unwrap()]),
            truth: None,
        };
        spec.validate().unwrap();
        let sigma = assemble_sigma(&spec, &Theta::from_vec(vec![1.0])).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        assert_eq!(sigma.matrix(), &expect);
    }
}
