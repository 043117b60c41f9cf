//! Observation-level simulation: the four latent processes, the factor
//! maps X₁ = Λ₁ξ + δ and X₂ = Λ₂η + ε with η = Ψ⁻¹(Γξ + ζ), sampling on
//! the coarse grid, the population covariance Σ₀, and CSV import/export.

use std::io::{BufRead, Write};

use nalgebra::{DMatrix, DVector};
use sem_core::{invert_psi, numerical_rank, sigma_from_structural, CovarianceMatrix, StructuralMatrices};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::latent::Stepper;
use crate::rng::{NoiseProcess, ProcessStreams};
use crate::sde::SdeSpec;

/// Sampling grid: n increments of step h = T/n, each refined into
/// `eulerSubsteps` fine Euler steps, driven by one 64-bit seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingDesign {
    /// Number of observed increments n ≥ 1.
    pub n: usize,
    /// Horizon T > 0, so h = T/n.
    #[serde(rename = "T")]
    pub t: f64,
    /// Fine Euler steps per observed increment, s ≥ 1.
    #[serde(rename = "eulerSubsteps", default = "default_substeps")]
    pub euler_substeps: usize,
    /// Master seed for the path. Campaign runners override this per
    /// replicate, so documents may omit it (defaults to 0).
    #[serde(default)]
    pub seed: u64,
}

fn default_substeps() -> usize {
    10
}

impl SamplingDesign {
    /// Observation step h = T/n.
    pub fn h(&self) -> f64 {
        self.t / self.n as f64
    }

    /// Check n ≥ 1, T > 0 finite, s ≥ 1.
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(SimError::InvalidDesign("n must be at least 1".into()));
        }
        if !self.t.is_finite() || self.t <= 0.0 {
            return Err(SimError::InvalidDesign(format!(
                "horizon T must be positive and finite, got {}",
                self.t
            )));
        }
        if self.euler_substeps < 1 {
            return Err(SimError::InvalidDesign("eulerSubsteps must be at least 1".into()));
        }
        Ok(())
    }
}

/// The data-generating system: four latent jump diffusions plus the fixed
/// loading matrices of the factor maps.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "TrueModelDto", into = "TrueModelDto")]
pub struct TrueModelSpec {
    /// Common factor ξ, dimension k1.
    pub xi: SdeSpec,
    /// First-block noise δ, dimension p1.
    pub delta: SdeSpec,
    /// Second-block noise ε, dimension p2.
    pub eps: SdeSpec,
    /// Structural noise ζ, dimension k2.
    pub zeta: SdeSpec,
    /// Λ₁ (p1×k1).
    pub lambda1: DMatrix<f64>,
    /// Λ₂ (p2×k2).
    pub lambda2: DMatrix<f64>,
    /// B (k2×k2); Ψ = I − B.
    pub b: DMatrix<f64>,
    /// Γ (k2×k1).
    pub gamma: DMatrix<f64>,
}

impl TrueModelSpec {
    /// Observable dimension p = p1 + p2.
    pub fn p(&self) -> usize {
        self.delta.dim + self.eps.dim
    }

    /// Structural checks: process specs valid, matrix shapes chained to the
    /// process dimensions, loadings of full column rank, Ψ non-singular.
    pub fn validate(&self) -> Result<()> {
        self.xi.validate()?;
        self.delta.validate()?;
        self.eps.validate()?;
        self.zeta.validate()?;
        let (k1, p1, p2, k2) = (self.xi.dim, self.delta.dim, self.eps.dim, self.zeta.dim);
        if k1 < 1 || p1 < 1 {
            return Err(SimError::InvalidSpec(
                "the first block needs at least one factor and one observable".into(),
            ));
        }
        if k1 > p1 || k2 > p2 {
            return Err(SimError::InvalidSpec(format!(
                "factor dimensions must not exceed observable dimensions \
                 (k1={k1} vs p1={p1}, k2={k2} vs p2={p2})"
            )));
        }
        check_shape("lambda1", &self.lambda1, p1, k1)?;
        check_shape("lambda2", &self.lambda2, p2, k2)?;
        check_shape("b", &self.b, k2, k2)?;
        check_shape("gamma", &self.gamma, k2, k1)?;
        if numerical_rank(&self.lambda1) != k1 {
            return Err(SimError::InvalidSpec("lambda1 must have full column rank".into()));
        }
        if k2 > 0 && numerical_rank(&self.lambda2) != k2 {
            return Err(SimError::InvalidSpec("lambda2 must have full column rank".into()));
        }
        self.psi_inv()?;
        Ok(())
    }

    fn psi_inv(&self) -> Result<DMatrix<f64>> {
        let k2 = self.zeta.dim;
        let psi = DMatrix::identity(k2, k2) - &self.b;
        Ok(invert_psi(&psi)?)
    }

    /// Population covariance Σ₀ built from the block formulas with
    /// Σ_{··} = SSᵀ per process.
    pub fn true_sigma(&self) -> Result<CovarianceMatrix> {
        let k2 = self.zeta.dim;
        let psi = DMatrix::identity(k2, k2) - &self.b;
        let psi_inv = invert_psi(&psi)?;
        let sm = StructuralMatrices {
            lambda1: self.lambda1.clone(),
            lambda2: self.lambda2.clone(),
            b: self.b.clone(),
            gamma: self.gamma.clone(),
            sigma_xixi: self.xi.diffusion_covariance(),
            sigma_deltadelta: self.delta.diffusion_covariance(),
            sigma_epseps: self.eps.diffusion_covariance(),
            sigma_zetazeta: self.zeta.diffusion_covariance(),
            psi,
            psi_inv,
        };
        Ok(sigma_from_structural(&sm)?)
    }
}

fn check_shape(name: &str, m: &DMatrix<f64>, rows: usize, cols: usize) -> Result<()> {
    // A zero-row or zero-column matrix collapses entirely, so only the
    // nonzero case pins both dimensions.
    let ok = if rows == 0 || cols == 0 {
        m.nrows() * m.ncols() == 0
    } else {
        m.nrows() == rows && m.ncols() == cols
    };
    if ok {
        Ok(())
    } else {
        Err(SimError::InvalidSpec(format!(
            "{name} has shape {}x{}, expected {rows}x{cols}",
            m.nrows(),
            m.ncols()
        )))
    }
}

// ------------------------------------------------------------------ serde --

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProcessesDto {
    xi: SdeSpec,
    delta: SdeSpec,
    eps: SdeSpec,
    zeta: SdeSpec,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrueModelDto {
    processes: ProcessesDto,
    lambda1: Vec<Vec<f64>>,
    lambda2: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    gamma: Vec<Vec<f64>>,
}

fn matrix_from_rows(name: &str, rows: &[Vec<f64>]) -> std::result::Result<DMatrix<f64>, String> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(format!("{name} rows have unequal lengths"));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

impl TryFrom<TrueModelDto> for TrueModelSpec {
    type Error = String;

    fn try_from(dto: TrueModelDto) -> std::result::Result<Self, String> {
        let spec = TrueModelSpec {
            xi: dto.processes.xi,
            delta: dto.processes.delta,
            eps: dto.processes.eps,
            zeta: dto.processes.zeta,
            lambda1: matrix_from_rows("lambda1", &dto.lambda1)?,
            lambda2: matrix_from_rows("lambda2", &dto.lambda2)?,
            b: matrix_from_rows("b", &dto.b)?,
            gamma: matrix_from_rows("gamma", &dto.gamma)?,
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

impl From<TrueModelSpec> for TrueModelDto {
    fn from(spec: TrueModelSpec) -> Self {
        TrueModelDto {
            lambda1: matrix_to_rows(&spec.lambda1),
            lambda2: matrix_to_rows(&spec.lambda2),
            b: matrix_to_rows(&spec.b),
            gamma: matrix_to_rows(&spec.gamma),
            processes: ProcessesDto {
                xi: spec.xi,
                delta: spec.delta,
                eps: spec.eps,
                zeta: spec.zeta,
            },
        }
    }
}

// ----------------------------------------------------------- observations --

/// Discrete observations X_{t₀}, …, X_{tₙ} on the coarse grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationPath {
    /// Grid times t_i = T·i/n, length n + 1.
    pub times: Vec<f64>,
    /// Observed states, (n+1)×p.
    pub x: DMatrix<f64>,
    /// Observation step h = T/n.
    pub h: f64,
}

impl ObservationPath {
    /// Number of increments n.
    pub fn n(&self) -> usize {
        self.x.nrows() - 1
    }

    /// Observable dimension p.
    pub fn p(&self) -> usize {
        self.x.ncols()
    }
}

/// Simulate the observable system on the coarse grid.
///
/// The four latent processes consume disjoint RNG streams derived from
/// `design.seed` (stream-per-process), evolve on the fine grid of step
/// h/eulerSubsteps, and are mapped through the factor equations at every
/// coarse time. Deterministic given (spec, design).
pub fn simulate_observations(
    tm: &TrueModelSpec,
    design: &SamplingDesign,
) -> Result<ObservationPath> {
    tm.validate()?;
    design.validate()?;

    let (k1, p1, p2, k2) = (tm.xi.dim, tm.delta.dim, tm.eps.dim, tm.zeta.dim);
    let p = p1 + p2;
    let n = design.n;
    let s = design.euler_substeps;
    let dt = design.t / (n * s) as f64;

    let psi_inv = tm.psi_inv()?;
    let psi_inv_gamma = &psi_inv * &tm.gamma;

    let mut xi = Stepper::new(&tm.xi, ProcessStreams::new(design.seed, NoiseProcess::Xi), dt);
    let mut delta =
        Stepper::new(&tm.delta, ProcessStreams::new(design.seed, NoiseProcess::Delta), dt);
    let mut eps = Stepper::new(&tm.eps, ProcessStreams::new(design.seed, NoiseProcess::Eps), dt);
    let mut zeta =
        Stepper::new(&tm.zeta, ProcessStreams::new(design.seed, NoiseProcess::Zeta), dt);

    let mut x = DMatrix::zeros(n + 1, p);
    let mut times = Vec::with_capacity(n + 1);

    let mut xi_v = DVector::zeros(k1);
    let mut delta_v = DVector::zeros(p1);
    let mut eps_v = DVector::zeros(p2);
    let mut zeta_v = DVector::zeros(k2);
    let mut x1 = DVector::zeros(p1);
    let mut eta = DVector::zeros(k2);
    let mut x2 = DVector::zeros(p2);

    for i in 0..=n {
        if i > 0 {
            for _ in 0..s {
                xi.step();
                delta.step();
                eps.step();
                zeta.step();
            }
        }
        xi_v.copy_from_slice(xi.state());
        delta_v.copy_from_slice(delta.state());
        eps_v.copy_from_slice(eps.state());
        zeta_v.copy_from_slice(zeta.state());

        x1.copy_from(&delta_v);
        x1.gemv(1.0, &tm.lambda1, &xi_v, 1.0);
        for j in 0..p1 {
            x[(i, j)] = x1[j];
        }
        if p2 > 0 {
            eta.gemv(1.0, &psi_inv_gamma, &xi_v, 0.0);
            eta.gemv(1.0, &psi_inv, &zeta_v, 1.0);
            x2.copy_from(&eps_v);
            x2.gemv(1.0, &tm.lambda2, &eta, 1.0);
            for j in 0..p2 {
                x[(i, p1 + j)] = x2[j];
            }
        }
        times.push(design.t * i as f64 / n as f64);
    }

    Ok(ObservationPath { times, x, h: design.h() })
}

// -------------------------------------------------------------------- csv --

/// Write a path as CSV with header `t,x1,...,xp`. Floats are printed in
/// shortest round-trip form, so a read-back reproduces the values exactly.
pub fn write_csv<W: Write>(path: &ObservationPath, mut w: W) -> Result<()> {
    let p = path.p();
    write!(w, "t")?;
    for j in 1..=p {
        write!(w, ",x{j}")?;
    }
    writeln!(w)?;
    for i in 0..path.x.nrows() {
        write!(w, "{}", path.times[i])?;
        for j in 0..p {
            write!(w, ",{}", path.x[(i, j)])?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Read a path written by [`write_csv`]: recovers h from the time column
/// and checks the grid is uniform from 0.
pub fn read_csv<R: BufRead>(r: R) -> Result<ObservationPath> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| SimError::Parse("empty CSV".into()))??;
    let cols: Vec<&str> = header.trim_end().split(',').collect();
    if cols.first() != Some(&"t") {
        return Err(SimError::Parse(format!(
            "expected header starting with 't', got {header:?}"
        )));
    }
    for (j, c) in cols.iter().enumerate().skip(1) {
        let expected = format!("x{j}");
        if *c != expected {
            return Err(SimError::Parse(format!(
                "expected column {expected:?}, got {c:?}"
            )));
        }
    }
    let p = cols.len() - 1;
    if p == 0 {
        return Err(SimError::Parse("no observation columns".into()));
    }

    let mut times = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != p + 1 {
            return Err(SimError::Parse(format!(
                "row {} has {} fields, expected {}",
                lineno + 2,
                fields.len(),
                p + 1
            )));
        }
        let mut parsed = fields.iter().map(|f| {
            f.parse::<f64>()
                .map_err(|e| SimError::Parse(format!("row {}: {e}", lineno + 2)))
        });
        times.push(parsed.next().unwrap()?);
        for v in parsed {
            values.push(v?);
        }
    }
    if times.len() < 2 {
        return Err(SimError::Parse("need at least two rows (n >= 1)".into()));
    }
    let n = times.len() - 1;
    let t_end = times[n];
    if times[0] != 0.0 || !(t_end > 0.0) {
        return Err(SimError::Parse("time grid must start at 0 and end at T > 0".into()));
    }
    let h = t_end / n as f64;
    let tol = 1e-9 * t_end.max(1.0);
    for (i, t) in times.iter().enumerate() {
        if (t - h * i as f64).abs() > tol {
            return Err(SimError::Parse(format!(
                "time grid is not uniform at row {} (t={t}, expected {})",
                i + 2,
                h * i as f64
            )));
        }
    }
    let x = DMatrix::from_fn(n + 1, p, |i, j| values[i * p + j]);
    Ok(ObservationPath { times, x, h })
}
