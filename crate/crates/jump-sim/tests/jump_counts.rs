//! Law of the jump-event counts: over [0, T] each coordinate's total event
//! count is Poisson(λT), independent of the Euler refinement.

use jump_sim::{benchmark_true_model, simulate_latent, NoiseProcess, ProcessStreams};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const SEEDS: u64 = 10_000;

fn xi_event_counts() -> Vec<u64> {
    let tm = benchmark_true_model();
    (0..SEEDS)
        .map(|seed| {
            let streams = ProcessStreams::new(seed, NoiseProcess::Xi);
            let path = simulate_latent(&tm.xi, 50, 1.0, streams);
            path.jump_events[0]
        })
        .collect()
}

/// Mean event count for the xi process (λ = 4, T = 1) over 10⁴ seeds must
/// land in 4.00 ± 0.06 (a 3σ band: σ = √(4/10⁴) = 0.02).
#[test]
fn xi_mean_event_count_matches_intensity() {
    let counts = xi_event_counts();
    let mean = counts.iter().sum::<u64>() as f64 / SEEDS as f64;
    assert!(
        (mean - 4.00).abs() <= 0.06,
        "mean jump-event count {mean} outside 4.00 +/- 0.06"
    );
}

/// Chi-square goodness of fit of the event-count histogram against
/// Poisson(4) at significance 0.001.
#[test]
fn xi_event_counts_are_poisson() {
    let counts = xi_event_counts();

    // Bins 0..=11 individually, >= 12 lumped: every expected count >= 5.
    const CUT: usize = 12;
    let mut observed = [0.0f64; CUT + 1];
    for c in &counts {
        observed[(*c as usize).min(CUT)] += 1.0;
    }

    let lambda = 4.0f64;
    let mut pmf = (-lambda).exp();
    let mut expected = [0.0f64; CUT + 1];
    let mut tail = 1.0;
    for (k, slot) in expected.iter_mut().enumerate().take(CUT) {
        if k > 0 {
            pmf *= lambda / k as f64;
        }
        *slot = SEEDS as f64 * pmf;
        tail -= pmf;
    }
    expected[CUT] = SEEDS as f64 * tail;
    assert!(expected.iter().all(|e| *e >= 5.0), "binning rule violated: {expected:?}");

    let chi2: f64 = observed
        .iter()
        .zip(expected.iter())
        .map(|(o, e)| (o - e).powi(2) / e)
        .sum();
    let dof = CUT as f64; // bins - 1
    let critical = ChiSquared::new(dof).unwrap().inverse_cdf(0.999);
    assert!(
        chi2 <= critical,
        "chi-square statistic {chi2:.3} exceeds the 0.1% critical value {critical:.3}"
    );
}
