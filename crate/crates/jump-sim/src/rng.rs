//! Deterministic stream layout for every random draw in a simulation.
//!
//! All randomness flows from explicit `u64` seeds through two layers:
//!
//! 1. [`derive`] maps a base seed and a child index to an independent child
//!    seed (the i-th output of a SplitMix64 generator seeded at the base).
//! 2. Each latent noise process owns three ChaCha8 streams — Gaussian
//!    increments, jump counts, and jump sizes — seeded as
//!    `derive(path_seed, 3·process + kind)` with processes ordered
//!    ξ = 0, δ = 1, ε = 2, ζ = 3 and kinds ordered Gaussian = 0,
//!    Poisson = 1, jump size = 2.
//!
//! Within one fine Euler step a process consumes, in order: its `dim`
//! standard-normal draws from the Gaussian stream, then per coordinate one
//! Poisson count (skipped entirely when λ·dt = 0) followed by that many size
//! draws. This layout makes every path bit-reproducible from its seed and
//! keeps the processes' streams independent: altering one process's jump
//! intensity cannot shift the draws seen by any other process.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 output function.
fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The i-th output of a SplitMix64 sequence seeded at `base`.
pub fn derive(base: u64, i: u64) -> u64 {
    splitmix64(base.wrapping_add((i.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// The four latent noise processes, in stream order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseProcess {
    /// Exogenous factor process ξ.
    Xi = 0,
    /// First-block measurement error process δ.
    Delta = 1,
    /// Second-block measurement error process ε.
    Eps = 2,
    /// Structural error process ζ.
    Zeta = 3,
}

/// The three independent ChaCha8 streams owned by one noise process.
#[derive(Debug, Clone)]
pub struct ProcessStreams {
    /// Standard-normal increments of the Brownian driver.
    pub gaussian: ChaCha8Rng,
    /// Poisson jump counts per fine step.
    pub poisson: ChaCha8Rng,
    /// Jump size draws.
    pub jump_size: ChaCha8Rng,
}

impl ProcessStreams {
    pub fn new(path_seed: u64, process: NoiseProcess) -> Self {
        let base = 3 * process as u64;
        ProcessStreams {
            gaussian: ChaCha8Rng::seed_from_u64(derive(path_seed, base)),
            poisson: ChaCha8Rng::seed_from_u64(derive(path_seed, base + 1)),
            jump_size: ChaCha8Rng::seed_from_u64(derive(path_seed, base + 2)),
        }
    }
}
