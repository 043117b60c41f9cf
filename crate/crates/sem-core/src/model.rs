//! Candidate model specifications and their materialization at a parameter.
//!
//! A [`ModelSpec`] declares, for each structural matrix, which entries are
//! fixed constants and which are free parameters, together with per-parameter
//! box (or sign-split union) bounds. [`materialize`] substitutes a concrete θ
//! and derives Ψ = I − B with its inverse.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::entries::{EntryMatrix, SymEntryMatrix};
use crate::error::{Result, SemError};

/// Problem sizes: two observable blocks (p1, p2) and two factor blocks
/// (k1 exogenous, k2 endogenous), plus the free-parameter count q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dimensions {
    pub p1: usize,
    pub p2: usize,
    pub k1: usize,
    pub k2: usize,
    pub q: usize,
}

impl Dimensions {
    /// Total observable dimension p = p1 + p2.
    pub fn p(&self) -> usize {
        self.p1 + self.p2
    }

    /// Half-vectorization length p̄ = p(p+1)/2.
    pub fn p_bar(&self) -> usize {
        let p = self.p();
        p * (p + 1) / 2
    }

    /// Structural constraints on the sizes.
    ///
    /// The first observable block and its factor must be non-empty; the
    /// second block may be absent entirely (p2 = k2 = 0), which is how
    /// single-block and scalar models are expressed.
    pub fn validate(&self) -> Result<()> {
        if self.p1 == 0 || self.k1 == 0 {
            return Err(SemError::InvalidSpec(
                "p1 and k1 must be at least 1".into(),
            ));
        }
        if self.k1 > self.p1 || self.k2 > self.p2 {
            return Err(SemError::InvalidSpec(format!(
                "factor counts cannot exceed their observable blocks: k1={} p1={} k2={} p2={}",
                self.k1, self.p1, self.k2, self.p2
            )));
        }
        Ok(())
    }
}

/// A candidate SEM model: dimensions, free/fixed entry maps for all
/// structural matrices, and per-parameter bounds.
///
/// JSON layout: keys `dims`, `lambda1`, `lambda2`, `b`, `gamma`,
/// `sigma_xixi`, `sigma_deltadelta`, `sigma_epseps`, `sigma_zetazeta`,
/// `bounds`, and optionally `truth` (a reference parameter vector used to
/// initialize optimizers in simulation studies).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub dims: Dimensions,
    /// Λ₁: p1×k1 first-block loadings.
    pub lambda1: EntryMatrix,
    /// Λ₂: p2×k2 second-block loadings.
    pub lambda2: EntryMatrix,
    /// B: k2×k2 structural coefficients with fixed-zero diagonal.
    pub b: EntryMatrix,
    /// Γ: k2×k1 exogenous-to-endogenous coefficients.
    pub gamma: EntryMatrix,
    /// Σ_ξξ: k1×k1 exogenous factor covariance.
    pub sigma_xixi: SymEntryMatrix,
    /// Σ_δδ: p1×p1 first-block error covariance.
    pub sigma_deltadelta: SymEntryMatrix,
    /// Σ_εε: p2×p2 second-block error covariance.
    pub sigma_epseps: SymEntryMatrix,
    /// Σ_ζζ: k2×k2 structural error covariance.
    pub sigma_zetazeta: SymEntryMatrix,
    /// Per-parameter admissible interval unions (Θ).
    pub bounds: Bounds,
    /// Optional reference parameter (e.g. the data-generating value for a
    /// correctly specified model, or a pseudo-true value otherwise).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<Vec<f64>>,
}

impl ModelSpec {
    /// Parameter count q.
    pub fn q(&self) -> usize {
        self.dims.q
    }

    /// Observable dimension p.
    pub fn p(&self) -> usize {
        self.dims.p()
    }

    /// Parse a JSON document and validate it.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ModelSpec =
            serde_json::from_str(text).map_err(|e| SemError::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Serialize to pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model spec serializes")
    }

    /// Check every structural invariant of the specification.
    pub fn validate(&self) -> Result<()> {
        let d = &self.dims;
        d.validate()?;
        self.lambda1.check_shape("lambda1", d.p1, d.k1)?;
        self.lambda2.check_shape("lambda2", d.p2, d.k2)?;
        self.b.check_shape("b", d.k2, d.k2)?;
        self.gamma.check_shape("gamma", d.k2, d.k1)?;
        self.sigma_xixi.check_dim("sigma_xixi", d.k1)?;
        self.sigma_deltadelta.check_dim("sigma_deltadelta", d.p1)?;
        self.sigma_epseps.check_dim("sigma_epseps", d.p2)?;
        self.sigma_zetazeta.check_dim("sigma_zetazeta", d.k2)?;

        for i in 0..d.k2 {
            if !self.b.get(i, i).is_fixed_at(0.0) {
                return Err(SemError::InvalidSpec(format!(
                    "diagonal of b must be fixed at 0, entry ({i},{i}) is not"
                )));
            }
        }

        if self.bounds.len() != d.q {
            return Err(SemError::InvalidSpec(format!(
                "bounds lists {} parameters but q = {}",
                self.bounds.len(),
                d.q
            )));
        }
        self.bounds.validate()?;

        // Free-index bookkeeping: every index < q, no orphans in 0..q.
        let mut used = vec![false; d.q];
        let mut mark = |idx: Option<usize>| -> Result<()> {
            if let Some(k) = idx {
                if k >= d.q {
                    return Err(SemError::InvalidSpec(format!(
                        "free index t{k} out of range (q = {})",
                        d.q
                    )));
                }
                used[k] = true;
            }
            Ok(())
        };
        for e in self
            .lambda1
            .iter()
            .chain(self.lambda2.iter())
            .chain(self.b.iter())
            .chain(self.gamma.iter())
        {
            mark(e.free_index())?;
        }
        for e in self
            .sigma_xixi
            .iter_lower()
            .chain(self.sigma_deltadelta.iter_lower())
            .chain(self.sigma_epseps.iter_lower())
            .chain(self.sigma_zetazeta.iter_lower())
        {
            mark(e.free_index())?;
        }
        if let Some(k) = used.iter().position(|u| !u) {
            return Err(SemError::InvalidSpec(format!(
                "parameter t{k} is not used by any entry"
            )));
        }

        // Free variance-block diagonal parameters need strictly positive
        // lower bounds.
        for (name, block) in [
            ("sigma_xixi", &self.sigma_xixi),
            ("sigma_deltadelta", &self.sigma_deltadelta),
            ("sigma_epseps", &self.sigma_epseps),
            ("sigma_zetazeta", &self.sigma_zetazeta),
        ] {
            for e in block.diag_entries() {
                if let Some(k) = e.free_index() {
                    if !self.bounds.get(k).strictly_positive() {
                        return Err(SemError::InvalidSpec(format!(
                            "diagonal of {name} uses t{k} whose bounds must have a strictly positive lower endpoint"
                        )));
                    }
                }
            }
        }

        if let Some(truth) = &self.truth {
            if truth.len() != d.q {
                return Err(SemError::InvalidSpec(format!(
                    "truth vector has length {}, expected q = {}",
                    truth.len(),
                    d.q
                )));
            }
            if !self.bounds.contains(truth) {
                return Err(SemError::InvalidSpec(
                    "truth vector lies outside the declared bounds".into(),
                ));
            }
        }

        Ok(())
    }

    /// The reference parameter as a [`Theta`], when present.
    pub fn truth_theta(&self) -> Option<Theta> {
        self.truth.as_ref().map(|v| Theta::from_vec(v.clone()))
    }
}

/// A parameter vector θ of length q.
///
/// `validated` enforces the model bounds; `from_vec` skips that check, which
/// is what derivative probes and optimizer internals need (they evaluate Σ(θ)
/// at points that may sit marginally outside the open box). Operations on a
/// `Theta` check its length and report invalid regions through the typed
/// `SingularPsi` / `NotPositiveDefinite` errors.
#[derive(Debug, Clone, PartialEq)]
pub struct Theta(Vec<f64>);

impl Theta {
    /// Wrap a raw vector without a bounds check.
    pub fn from_vec(values: Vec<f64>) -> Self {
        Theta(values)
    }

    /// Wrap a vector after checking length, finiteness, and bounds membership.
    pub fn validated(spec: &ModelSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.q() {
            return Err(SemError::InvalidTheta(format!(
                "theta has length {}, expected q = {}",
                values.len(),
                spec.q()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SemError::InvalidTheta("theta has non-finite entries".into()));
        }
        if !spec.bounds.contains(&values) {
            return Err(SemError::InvalidTheta(
                "theta lies outside the admissible bounds".into(),
            ));
        }
        Ok(Theta(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.clone()
    }

    /// Membership in the model's admissible region.
    pub fn in_bounds(&self, spec: &ModelSpec) -> bool {
        self.0.len() == spec.q() && spec.bounds.contains(&self.0)
    }

    fn check_len(&self, spec: &ModelSpec) -> Result<()> {
        if self.0.len() == spec.q() {
            Ok(())
        } else {
            Err(SemError::InvalidTheta(format!(
                "theta has length {}, expected q = {}",
                self.0.len(),
                spec.q()
            )))
        }
    }
}

/// All eight structural matrices with numbers substituted, plus Ψ = I − B
/// and Ψ⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralMatrices {
    pub lambda1: DMatrix<f64>,
    pub lambda2: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub gamma: DMatrix<f64>,
    pub sigma_xixi: DMatrix<f64>,
    pub sigma_deltadelta: DMatrix<f64>,
    pub sigma_epseps: DMatrix<f64>,
    pub sigma_zetazeta: DMatrix<f64>,
    pub psi: DMatrix<f64>,
    pub psi_inv: DMatrix<f64>,
}

/// Invert Ψ = I − B, flagging singularity at working precision.
pub fn invert_psi(psi: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let k2 = psi.nrows();
    if k2 == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let det = psi.determinant();
    if !det.is_finite() || det.abs() < 1e-14 * (1.0 + psi.norm()).powi(k2 as i32) {
        return Err(SemError::SingularPsi);
    }
    psi.clone().try_inverse().ok_or(SemError::SingularPsi)
}

/// Substitute θ into every structural matrix and derive Ψ and Ψ⁻¹.
pub fn materialize(spec: &ModelSpec, theta: &Theta) -> Result<StructuralMatrices> {
    theta.check_len(spec)?;
    let t = theta.as_slice();
    let d = &spec.dims;
    // A zero-row matrix deserialized from `[]` carries no column count, so
    // shape each block explicitly from the declared dimensions.
    let shaped = |m: &EntryMatrix, nrows: usize, ncols: usize| -> DMatrix<f64> {
        if m.nrows() == 0 {
            DMatrix::zeros(nrows, ncols)
        } else {
            m.materialize(t)
        }
    };
    let b = shaped(&spec.b, d.k2, d.k2);
    let psi = DMatrix::identity(d.k2, d.k2) - &b;
    let psi_inv = invert_psi(&psi)?;
    Ok(StructuralMatrices {
        lambda1: shaped(&spec.lambda1, d.p1, d.k1),
        lambda2: shaped(&spec.lambda2, d.p2, d.k2),
        b,
        gamma: shaped(&spec.gamma, d.k2, d.k1),
        sigma_xixi: spec.sigma_xixi.materialize(t),
        sigma_deltadelta: spec.sigma_deltadelta.materialize(t),
        sigma_epseps: spec.sigma_epseps.materialize(t),
        sigma_zetazeta: spec.sigma_zetazeta.materialize(t),
        psi,
        psi_inv,
    })
}
