//! Specification of one latent noise process: a d-dimensional jump
//! diffusion dX = a(X) dt + S dW + dJ with compound-Poisson jumps.
//!
//! The JSON form covers the declarative variants (affine drift, normal jump
//! sizes, per-coordinate jumps); closures are available as an in-process
//! escape hatch but refuse to serialize. JSON layout:
//!
//! ```json
//! {
//!   "x0": [3.0],
//!   "drift": { "kind": "affine", "rate": [4.0], "mean": [3.0] },
//!   "diffusion": [[0.8]],
//!   "jumps": [{ "lambda": 4.0, "dist": { "kind": "normal", "mean": 0.0, "var": 2.0 } }]
//! }
//! ```

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as DeError;
use serde::ser::Error as SerError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, SimError};

/// Drift coefficient a(x).
#[derive(Clone)]
pub enum Drift {
    /// Mean-reverting coordinatewise drift: aᵢ(x) = −rateᵢ·(xᵢ − meanᵢ).
    Affine { rate: Vec<f64>, mean: Vec<f64> },
    /// Arbitrary drift callback writing a(x) into its second argument
    /// (not serializable).
    Custom(Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>),
}

impl Drift {
    /// Write a(x) into `out`.
    #[inline]
    pub fn eval(&self, x: &[f64], out: &mut [f64]) {
        match self {
            Drift::Affine { rate, mean } => {
                for i in 0..x.len() {
                    out[i] = -rate[i] * (x[i] - mean[i]);
                }
            }
            Drift::Custom(f) => f(x, out),
        }
    }
}

impl fmt::Debug for Drift {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Drift::Affine { rate, mean } => f
                .debug_struct("Affine")
                .field("rate", rate)
                .field("mean", mean)
                .finish(),
            Drift::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Distribution of one scalar jump size.
#[derive(Clone)]
pub enum SizeDist {
    /// Normal with the given mean and (strictly positive) variance.
    Normal { mean: f64, var: f64 },
    /// Arbitrary sampler callback (not serializable).
    Custom(Arc<dyn Fn(&mut ChaCha8Rng) -> f64 + Send + Sync>),
}

impl fmt::Debug for SizeDist {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            SizeDist::Normal { mean, var } => f
                .debug_struct("Normal")
                .field("mean", mean)
                .field("var", var)
                .finish(),
            SizeDist::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Compound-Poisson jumps for one coordinate.
#[derive(Debug, Clone)]
pub struct JumpComponent {
    /// Arrival intensity λ ≥ 0 per unit time; zero disables jumps.
    pub lambda: f64,
    /// Jump size distribution.
    pub dist: SizeDist,
}

impl JumpComponent {
    /// A disabled component (λ = 0).
    pub fn none() -> Self {
        JumpComponent { lambda: 0.0, dist: SizeDist::Normal { mean: 0.0, var: 1.0 } }
    }
}

/// Jump structure of one process.
#[derive(Clone)]
pub enum JumpSpec {
    /// Each coordinate is driven by its own independent Poisson measure
    /// (one component per coordinate). This is the fast path.
    PerCoordinate(Vec<JumpComponent>),
    /// A single Poisson measure whose events move all coordinates at once;
    /// the callback draws one d-dimensional jump size (not serializable).
    Joint {
        lambda: f64,
        sample: Arc<dyn Fn(&mut ChaCha8Rng) -> Vec<f64> + Send + Sync>,
    },
}

impl fmt::Debug for JumpSpec {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            JumpSpec::PerCoordinate(v) => f.debug_tuple("PerCoordinate").field(v).finish(),
            JumpSpec::Joint { lambda, .. } => f
                .debug_struct("Joint")
                .field("lambda", lambda)
                .field("sample", &"..")
                .finish(),
        }
    }
}

/// One latent jump-diffusion process.
#[derive(Debug, Clone)]
pub struct SdeSpec {
    /// State dimension d (zero allowed: the process is absent).
    pub dim: usize,
    /// Initial state, length d.
    pub x0: Vec<f64>,
    /// Drift coefficient.
    pub drift: Drift,
    /// Constant diffusion coefficient S, d×r with r ≥ 1 when d ≥ 1.
    pub s: DMatrix<f64>,
    /// Compound-Poisson jump structure.
    pub jumps: JumpSpec,
}

impl SdeSpec {
    /// An absent (zero-dimensional) process.
    pub fn empty() -> Self {
        SdeSpec {
            dim: 0,
            x0: Vec::new(),
            drift: Drift::Affine { rate: Vec::new(), mean: Vec::new() },
            s: DMatrix::zeros(0, 0),
            jumps: JumpSpec::PerCoordinate(Vec::new()),
        }
    }

    /// Structural validation: consistent lengths, finite values, λ ≥ 0,
    /// Gaussian jump variances strictly positive.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        if self.x0.len() != d {
            return Err(SimError::InvalidSpec(format!(
                "x0 has length {}, expected dim {d}",
                self.x0.len()
            )));
        }
        if self.x0.iter().any(|v| !v.is_finite()) {
            return Err(SimError::InvalidSpec("x0 has non-finite entries".into()));
        }
        if let Drift::Affine { rate, mean } = &self.drift {
            if rate.len() != d || mean.len() != d {
                return Err(SimError::InvalidSpec(format!(
                    "affine drift needs rate and mean of length {d}, got {} and {}",
                    rate.len(),
                    mean.len()
                )));
            }
            if rate.iter().chain(mean.iter()).any(|v| !v.is_finite()) {
                return Err(SimError::InvalidSpec("drift has non-finite entries".into()));
            }
        }
        if self.s.nrows() != d {
            return Err(SimError::InvalidSpec(format!(
                "diffusion matrix has {} rows, expected dim {d}",
                self.s.nrows()
            )));
        }
        if d >= 1 && self.s.ncols() < 1 {
            return Err(SimError::InvalidSpec(
                "diffusion matrix needs at least one column".into(),
            ));
        }
        if self.s.iter().any(|v| !v.is_finite()) {
            return Err(SimError::InvalidSpec("diffusion has non-finite entries".into()));
        }
        match &self.jumps {
            JumpSpec::PerCoordinate(parts) => {
                if parts.len() != d {
                    return Err(SimError::InvalidSpec(format!(
                        "per-coordinate jumps list {} components, expected dim {d}",
                        parts.len()
                    )));
                }
                for (i, j) in parts.iter().enumerate() {
                    if !j.lambda.is_finite() || j.lambda < 0.0 {
                        return Err(SimError::InvalidSpec(format!(
                            "jump intensity for coordinate {i} must be finite and >= 0, got {}",
                            j.lambda
                        )));
                    }
                    if let SizeDist::Normal { mean, var } = j.dist {
                        if !mean.is_finite() || !var.is_finite() || var <= 0.0 {
                            return Err(SimError::InvalidSpec(format!(
                                "jump size for coordinate {i} needs finite mean and var > 0"
                            )));
                        }
                    }
                }
            }
            JumpSpec::Joint { lambda, .. } => {
                if !lambda.is_finite() || *lambda < 0.0 {
                    return Err(SimError::InvalidSpec(format!(
                        "joint jump intensity must be finite and >= 0, got {lambda}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// True if S is square and diagonal (enables the elementwise path).
    pub fn s_is_diagonal(&self) -> bool {
        if self.s.nrows() != self.s.ncols() {
            return false;
        }
        for j in 0..self.s.ncols() {
            for i in 0..self.s.nrows() {
                if i != j && self.s[(i, j)] != 0.0 {
                    return false;
                }
            }
        }
        true
    }

    /// Diffusion covariance SSᵀ.
    pub fn diffusion_covariance(&self) -> DMatrix<f64> {
        &self.s * self.s.transpose()
    }
}

// ------------------------------------------------------------------ serde --

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum DriftDto {
    Affine { rate: Vec<f64>, mean: Vec<f64> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SizeDistDto {
    Normal { mean: f64, var: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JumpComponentDto {
    lambda: f64,
    dist: SizeDistDto,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SdeSpecDto {
    x0: Vec<f64>,
    drift: DriftDto,
    diffusion: Vec<Vec<f64>>,
    jumps: Vec<JumpComponentDto>,
}

impl Serialize for SdeSpec {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let drift = match &self.drift {
            Drift::Affine { rate, mean } => DriftDto::Affine {
                rate: rate.clone(),
                mean: mean.clone(),
            },
            Drift::Custom(_) => {
                return Err(S::Error::custom("custom drift callbacks cannot be serialized"))
            }
        };
        let jumps = match &self.jumps {
            JumpSpec::PerCoordinate(parts) => parts
                .iter()
                .map(|j| match j.dist {
                    SizeDist::Normal { mean, var } => Ok(JumpComponentDto {
                        lambda: j.lambda,
                        dist: SizeDistDto::Normal { mean, var },
                    }),
                    SizeDist::Custom(_) => Err(S::Error::custom(
                        "custom jump size callbacks cannot be serialized",
                    )),
                })
                .collect::<std::result::Result<Vec<_>, _>>()?,
            JumpSpec::Joint { .. } => {
                return Err(S::Error::custom("joint jump callbacks cannot be serialized"))
            }
        };
        let diffusion = (0..self.s.nrows())
            .map(|i| (0..self.s.ncols()).map(|j| self.s[(i, j)]).collect())
            .collect();
        SdeSpecDto { x0: self.x0.clone(), drift, diffusion, jumps }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SdeSpec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let dto = SdeSpecDto::deserialize(de)?;
        let dim = dto.x0.len();
        let ncols = dto.diffusion.first().map_or(0, Vec::len);
        if dto.diffusion.len() != dim {
            return Err(D::Error::custom(format!(
                "diffusion matrix has {} rows, expected dim {dim}",
                dto.diffusion.len()
            )));
        }
        if dto.diffusion.iter().any(|row| row.len() != ncols) {
            return Err(D::Error::custom("diffusion matrix rows have unequal lengths"));
        }
        let s = DMatrix::from_fn(dim, ncols, |i, j| dto.diffusion[i][j]);
        let DriftDto::Affine { rate, mean } = dto.drift;
        let spec = SdeSpec {
            dim,
            x0: dto.x0,
            drift: Drift::Affine { rate, mean },
            s,
            jumps: JumpSpec::PerCoordinate(
                dto.jumps
                    .into_iter()
                    .map(|j| JumpComponent {
                        lambda: j.lambda,
                        dist: match j.dist {
                            SizeDistDto::Normal { mean, var } => SizeDist::Normal { mean, var },
                        },
                    })
                    .collect(),
            ),
        };
        spec.validate().map_err(D::Error::custom)?;
        Ok(spec)
    }
}
