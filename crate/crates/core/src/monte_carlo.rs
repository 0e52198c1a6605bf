//! Monte Carlo validation of threshold policies.
//!
//! Each trial draws X₁..X_n by inverse transform, accepts the first
//! X_i ≤ τ_i (τ_n = +∞ guarantees termination), and also records the
//! trial's minimum as the prophet's cost. Trials are keyed by
//! (seed, trial index) on separate ChaCha streams, so results are
//! bitwise identical regardless of how the work is split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::stopping::ThresholdSchedule;

/// Trials per work item; reductions inside a batch are sequential, and the
/// batch results are merged in index order.
const BATCH: u64 = 1 << 14;

/// Summary of one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub trials: u64,
    pub seed: u64,
    /// Mean accepted cost.
    pub mean_cost: f64,
    /// Sample standard deviation of the accepted cost over √trials.
    pub std_error: f64,
    /// Mean per-trial minimum — the empirical prophet benchmark.
    pub prophet_mean: f64,
    pub prophet_std_error: f64,
    /// How often the policy stopped at position i (1-based, sums to trials).
    pub acceptance_index_histogram: Vec<u64>,
}

/// Kahan-compensated accumulator.
#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, value: f64) {
        let y = value - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

#[derive(Clone)]
struct BatchStats {
    cost: Kahan,
    cost_sq: Kahan,
    min: Kahan,
    min_sq: Kahan,
    histogram: Vec<u64>,
}

/// Runs `trials` independent trials of a threshold schedule.
pub fn simulate_schedule(
    spec: &DistributionSpec,
    schedule: &ThresholdSchedule,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::Domain(
            "simulate_schedule requires trials >= 1".into(),
        ));
    }
    let n = schedule.horizon();
    let taus = schedule.thresholds();
    let base = ChaCha8Rng::seed_from_u64(seed);

    let num_batches = trials.div_ceil(BATCH);
    let batches: Vec<BatchStats> = (0..num_batches)
        .into_par_iter()
        .map(|b| {
            let lo = b * BATCH;
            let hi = ((b + 1) * BATCH).min(trials);
            let mut stats = BatchStats {
                cost: Kahan::default(),
                cost_sq: Kahan::default(),
                min: Kahan::default(),
                min_sq: Kahan::default(),
                histogram: vec![0u64; n],
            };
            let mut rng = base.clone();
            for trial in lo..hi {
                rng.set_stream(trial);
                rng.set_word_pos(0);
                let mut accepted = f64::NAN;
                let mut accepted_at = n - 1;
                let mut minimum = f64::INFINITY;
                for (i, &tau) in taus.iter().enumerate() {
                    let x = spec.quantile(rng.random::<f64>()).expect("u in [0,1)");
                    if x < minimum {
                        minimum = x;
                    }
                    if accepted.is_nan() && x <= tau {
                        accepted = x;
                        accepted_at = i;
                    }
                }
                stats.cost.add(accepted);
                stats.cost_sq.add(accepted * accepted);
                stats.min.add(minimum);
                stats.min_sq.add(minimum * minimum);
                stats.histogram[accepted_at] += 1;
            }
            stats
        })
        .collect();

    let mut cost = Kahan::default();
    let mut cost_sq = Kahan::default();
    let mut min = Kahan::default();
    let mut min_sq = Kahan::default();
    let mut histogram = vec![0u64; n];
    for b in &batches {
        cost.add(b.cost.sum);
        cost_sq.add(b.cost_sq.sum);
        min.add(b.min.sum);
        min_sq.add(b.min_sq.sum);
        for (h, &c) in histogram.iter_mut().zip(&b.histogram) {
            *h += c;
        }
    }

    let t = trials as f64;
    let mean_cost = cost.sum / t;
    let mean_min = min.sum / t;
    let var = |sum_sq: f64, mean: f64| {
        if trials > 1 {
            ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0)
        } else {
            0.0
        }
    };
    Ok(SimulationReport {
        trials,
        seed,
        mean_cost,
        std_error: (var(cost_sq.sum, mean_cost) / t).sqrt(),
        prophet_mean: mean_min,
        prophet_std_error: (var(min_sq.sum, mean_min) / t).sqrt(),
        acceptance_index_histogram: histogram,
    })
}

/// Single-threshold policy: τ₁ = … = τ_{n−1} = t, τ_n = +∞.
pub fn simulate_single_threshold(
    spec: &DistributionSpec,
    t: f64,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    let schedule = ThresholdSchedule::flat(t, n)?;
    simulate_schedule(spec, &schedule, trials, seed)
}
