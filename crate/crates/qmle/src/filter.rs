//! The jump filter: increments whose Euclidean norm exceeds D·h^ρ are
//! attributed to jumps and excluded from the quasi-likelihood.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{QmleError, Result};

/// Threshold configuration: an increment is kept iff ‖ΔX‖ ≤ D·h^ρ.
///
/// The default admissible range for the exponent is 3/8 ≤ ρ < 1/2, which is
/// what the asymptotic theory assumes; the wider range [0, 3/8) of the raw
/// filtering rule is available only through the explicit
/// [`JumpFilterConfig::with_unrestricted_rho`] constructor.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpFilterConfig {
    /// Threshold scale D > 0.
    pub d: f64,
    /// Threshold exponent ρ.
    pub rho: f64,
}

impl JumpFilterConfig {
    /// Standard constructor: requires D > 0 and 3/8 ≤ ρ < 1/2.
    pub fn new(d: f64, rho: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(QmleError::InvalidFilter(format!("D must be positive, got {d}")));
        }
        if !(0.375..0.5).contains(&rho) {
            return Err(QmleError::InvalidFilter(format!(
                "rho must lie in [3/8, 1/2) by default, got {rho}; \
                 use with_unrestricted_rho for [0, 3/8)"
            )));
        }
        Ok(JumpFilterConfig { d, rho })
    }

    /// Explicit override admitting the full rule range 0 ≤ ρ < 1/2.
    pub fn with_unrestricted_rho(d: f64, rho: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(QmleError::InvalidFilter(format!("D must be positive, got {d}")));
        }
        if !(0.0..0.5).contains(&rho) {
            return Err(QmleError::InvalidFilter(format!(
                "rho must lie in [0, 1/2), got {rho}"
            )));
        }
        Ok(JumpFilterConfig { d, rho })
    }

    /// The standard protocol configuration D = 10, ρ = 0.4.
    pub fn standard() -> Self {
        JumpFilterConfig { d: 10.0, rho: 0.4 }
    }

    /// Threshold D·h^ρ for observation step h.
    pub fn threshold(&self, h: f64) -> f64 {
        self.d * h.powf(self.rho)
    }

    /// Validate a deserialized configuration (same rule as [`new`](Self::new)).
    pub fn validate(&self) -> Result<()> {
        Self::new(self.d, self.rho).map(|_| ())
    }
}

/// Increments of an observed path together with the jump-filter mask.
///
/// The mask depends only on the data and (D, ρ, h) — never on model
/// parameters — so one `IncrementSet` serves every candidate and every
/// optimizer iteration bit-identically.
#[derive(Debug, Clone)]
pub struct IncrementSet {
    /// Row i holds ΔᵢX = X_{tᵢ} − X_{tᵢ₋₁}; n×p.
    pub increments: DMatrix<f64>,
    /// kept[i] ⇔ ‖ΔᵢX‖ ≤ D·h^ρ.
    pub kept: Vec<bool>,
    /// Observation step h.
    pub h: f64,
    /// Number of kept increments.
    pub n_kept: usize,
    /// The threshold that produced the mask (for reporting).
    pub threshold: f64,
}

impl IncrementSet {
    /// Number of increments n.
    pub fn n(&self) -> usize {
        self.increments.nrows()
    }

    /// Observable dimension p.
    pub fn p(&self) -> usize {
        self.increments.ncols()
    }
}

/// Difference the observed path and apply the jump filter.
///
/// `x` holds the n+1 observed states as rows; `h` is the observation step.
pub fn make_increments(x: &DMatrix<f64>, h: f64, filter: &JumpFilterConfig) -> Result<IncrementSet> {
    if x.nrows() < 2 {
        return Err(QmleError::InvalidInput(format!(
            "need at least two observations, got {}",
            x.nrows()
        )));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(QmleError::InvalidInput(format!("step h must be positive, got {h}")));
    }
    let n = x.nrows() - 1;
    let p = x.ncols();
    let threshold = filter.threshold(h);

    let mut increments = DMatrix::zeros(n, p);
    let mut kept = Vec::with_capacity(n);
    let mut n_kept = 0;
    for i in 0..n {
        let mut norm2 = 0.0;
        for j in 0..p {
            let d = x[(i + 1, j)] - x[(i, j)];
            increments[(i, j)] = d;
            norm2 += d * d;
        }
        let keep = norm2.sqrt() <= threshold;
        kept.push(keep);
        n_kept += keep as usize;
    }
    Ok(IncrementSet { increments, kept, h, n_kept, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_arithmetic_matches_the_protocol() {
        // D = 10, rho = 0.4, h = 1e-3: threshold = 10 * 10^(-1.2).
        let f = JumpFilterConfig::new(10.0, 0.4).unwrap();
        let thr = f.threshold(1e-3);
        assert!((thr - 0.630_957_344_480_193_2).abs() < 1e-12, "{thr}");
    }

    #[test]
    fn rho_ranges_are_enforced() {
        assert!(JumpFilterConfig::new(10.0, 0.375).is_ok());
        assert!(JumpFilterConfig::new(10.0, 0.4999).is_ok());
        assert!(JumpFilterConfig::new(10.0, 0.5).is_err());
        assert!(JumpFilterConfig::new(10.0, 0.2).is_err());
        assert!(JumpFilterConfig::new(0.0, 0.4).is_err());
        assert!(JumpFilterConfig::with_unrestricted_rho(10.0, 0.2).is_ok());
        assert!(JumpFilterConfig::with_unrestricted_rho(10.0, 0.0).is_ok());
        assert!(JumpFilterConfig::with_unrestricted_rho(10.0, 0.5).is_err());
        assert!(JumpFilterConfig::with_unrestricted_rho(10.0, -0.1).is_err());
    }

    #[test]
    fn constant_path_keeps_every_increment() {
        let x = DMatrix::from_element(11, 2, 3.5);
        let inc = make_increments(&x, 0.01, &JumpFilterConfig::standard()).unwrap();
        assert_eq!(inc.n(), 10);
        assert_eq!(inc.n_kept, 10);
        assert!(inc.kept.iter().all(|k| *k));
        assert_eq!(inc.increments, DMatrix::zeros(10, 2));
    }

    #[test]
    fn oversized_increment_is_excluded() {
        // Threshold 0.63096 at h = 1e-3; a single increment of norm 0.7 is
        // attributed to a jump.
        let mut x = DMatrix::zeros(3, 1);
        x[(1, 0)] = 0.7; // first increment 0.7
        x[(2, 0)] = 0.75; // second increment 0.05
        let inc = make_increments(&x, 1e-3, &JumpFilterConfig::standard()).unwrap();
        assert_eq!(inc.kept, vec![false, true]);
        assert_eq!(inc.n_kept, 1);
    }

    #[test]
    fn enlarging_d_never_decreases_n_kept() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(17);
        let x = DMatrix::from_fn(101, 3, |_, _| rng.random_range(-0.2..0.2));
        let mut last = 0;
        for d in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let f = JumpFilterConfig::new(d, 0.4).unwrap();
            let inc = make_increments(&x, 1e-2, &f).unwrap();
            assert!(inc.n_kept >= last, "D={d}: {} < {last}", inc.n_kept);
            last = inc.n_kept;
        }
        // Decreasing rho with h < 1 raises the threshold as well.
        let mut last = 0;
        for rho in [0.4999, 0.45, 0.4, 0.375] {
            let f = JumpFilterConfig::new(1.0, rho).unwrap();
            let inc = make_increments(&x, 1e-2, &f).unwrap();
            assert!(inc.n_kept >= last, "rho={rho}: {} < {last}", inc.n_kept);
            last = inc.n_kept;
        }
    }
}
