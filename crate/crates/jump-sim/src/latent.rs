//! Euler–Maruyama simulation of one latent jump-diffusion process on the
//! fine grid of step h/s.
//!
//! One fine step advances x_k to
//! x_{k+1} = x_k + a(x_k)·(h/s) + S·√(h/s)·Z + J_k,
//! with Z standard normal of dimension r = S.ncols() and J_k the sum of
//! N_k ~ Poisson(λ·h/s) i.i.d. jump sizes per coordinate. Coefficients are
//! evaluated at the left endpoint x_k, and the jumps of a fine step are
//! aggregated at its end.
//!
//! Stream discipline per fine step (contractual): first the r Gaussian
//! draws from the `gaussian` stream, then per coordinate (in order) one
//! Poisson count from the `poisson` stream — skipped entirely when
//! λ·(h/s) = 0 — followed by that many size draws from the `jump_size`
//! stream.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::rng::ProcessStreams;
use crate::sde::{JumpSpec, SdeSpec, SizeDist};

/// A simulated latent path on the fine grid.
#[derive(Debug, Clone)]
pub struct LatentPath {
    /// Grid times t_k = k·(h/s), length n·s + 1.
    pub times: Vec<f64>,
    /// States, one row per grid time: (n·s + 1) × d.
    pub states: DMatrix<f64>,
    /// Total jump-event counts over [0, T]: one entry per coordinate for
    /// per-coordinate jumps, a single entry for a joint measure.
    pub jump_events: Vec<u64>,
}

fn draw_size(dist: &SizeDist, rng: &mut ChaCha8Rng) -> f64 {
    match dist {
        SizeDist::Normal { mean, var } => {
            let z: f64 = rng.sample(StandardNormal);
            mean + var.sqrt() * z
        }
        SizeDist::Custom(f) => f(rng),
    }
}

/// Incremental Euler–Maruyama stepper over the fine grid.
///
/// Advances one fine step at a time so that callers can subsample without
/// materializing the full fine path. The construction precomputes the
/// per-coordinate Poisson laws (skipping λ·dt = 0) and detects a diagonal
/// diffusion matrix for the elementwise fast path.
pub struct Stepper<'a> {
    spec: &'a SdeSpec,
    streams: ProcessStreams,
    dt: f64,
    sqrt_dt: f64,
    state: Vec<f64>,
    drift_buf: Vec<f64>,
    z_buf: Vec<f64>,
    poisson: Vec<Option<Poisson<f64>>>,
    jump_events: Vec<u64>,
    diagonal: bool,
}

impl<'a> Stepper<'a> {
    /// Set up a stepper at x0 with fine step `dt`.
    ///
    /// Panics if the spec fails validation; validate specs at construction.
    pub fn new(spec: &'a SdeSpec, streams: ProcessStreams, dt: f64) -> Self {
        spec.validate().expect("SdeSpec must be valid before simulation");
        assert!(dt > 0.0, "fine step must be positive");
        let poisson = match &spec.jumps {
            JumpSpec::PerCoordinate(parts) => parts
                .iter()
                .map(|j| make_poisson(j.lambda * dt))
                .collect(),
            JumpSpec::Joint { lambda, .. } => vec![make_poisson(lambda * dt)],
        };
        let n_counters = poisson.len();
        Stepper {
            spec,
            streams,
            dt,
            sqrt_dt: dt.sqrt(),
            state: spec.x0.clone(),
            drift_buf: vec![0.0; spec.dim],
            z_buf: vec![0.0; spec.s.ncols()],
            poisson,
            jump_events: vec![0; n_counters],
            diagonal: spec.s_is_diagonal(),
        }
    }

    /// Current state x_k.
    pub fn state(&self) -> &[f64] {
        &self.state
    }

    /// Jump events recorded so far (see [`LatentPath::jump_events`]).
    pub fn jump_events(&self) -> &[u64] {
        &self.jump_events
    }

    /// Consume the stepper, returning its event counters.
    pub fn into_jump_events(self) -> Vec<u64> {
        self.jump_events
    }

    /// Advance one fine step.
    pub fn step(&mut self) {
        let d = self.spec.dim;
        let r = self.z_buf.len();

        self.spec.drift.eval(&self.state, &mut self.drift_buf);
        for z in self.z_buf.iter_mut() {
            *z = self.streams.gaussian.sample(StandardNormal);
        }

        if self.diagonal {
            for i in 0..d {
                self.state[i] += self.drift_buf[i] * self.dt
                    + self.spec.s[(i, i)] * self.sqrt_dt * self.z_buf[i];
            }
        } else {
            for i in 0..d {
                let mut diff = 0.0;
                for j in 0..r {
                    diff += self.spec.s[(i, j)] * self.z_buf[j];
                }
                self.state[i] += self.drift_buf[i] * self.dt + self.sqrt_dt * diff;
            }
        }

        match &self.spec.jumps {
            JumpSpec::PerCoordinate(parts) => {
                for i in 0..d {
                    let Some(law) = &self.poisson[i] else { continue };
                    let count = law.sample(&mut self.streams.poisson) as u64;
                    self.jump_events[i] += count;
                    for _ in 0..count {
                        self.state[i] += draw_size(&parts[i].dist, &mut self.streams.jump_size);
                    }
                }
            }
            JumpSpec::Joint { sample, .. } => {
                let Some(law) = &self.poisson[0] else { return };
                let count = law.sample(&mut self.streams.poisson) as u64;
                self.jump_events[0] += count;
                for _ in 0..count {
                    let jump = sample(&mut self.streams.jump_size);
                    assert_eq!(jump.len(), d, "joint jump sample must have the state dimension");
                    for i in 0..d {
                        self.state[i] += jump[i];
                    }
                }
            }
        }
    }
}

fn make_poisson(mean: f64) -> Option<Poisson<f64>> {
    if mean == 0.0 {
        None
    } else {
        Some(Poisson::new(mean).expect("positive finite Poisson mean"))
    }
}

/// Simulate one latent path on the fine grid of n·s steps over [0, T].
///
/// `n_fine` is the total number of fine steps (n·eulerSubsteps) and `t` the
/// horizon; the fine step is t/n_fine. Panics on an invalid spec — validate
/// at construction so this never fires.
pub fn simulate_latent(
    spec: &SdeSpec,
    n_fine: usize,
    t: f64,
    streams: ProcessStreams,
) -> LatentPath {
    assert!(n_fine >= 1, "need at least one fine step");
    assert!(t > 0.0, "horizon must be positive");
    let dt = t / n_fine as f64;
    let mut stepper = Stepper::new(spec, streams, dt);

    let d = spec.dim;
    let mut states = DMatrix::zeros(n_fine + 1, d);
    let mut times = Vec::with_capacity(n_fine + 1);
    for j in 0..d {
        states[(0, j)] = spec.x0[j];
    }
    times.push(0.0);
    for k in 1..=n_fine {
        stepper.step();
        for j in 0..d {
            states[(k, j)] = stepper.state()[j];
        }
        times.push(t * k as f64 / n_fine as f64);
    }
    LatentPath { times, states, jump_events: stepper.into_jump_events() }
}
