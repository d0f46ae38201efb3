//! Seeded Monte Carlo estimates.
//!
//! Every trial draws from its own ChaCha8 stream: the generator is seeded
//! with the root seed and the stream number is the trial index. Trials are
//! therefore independent of execution order, run in parallel, and are
//! reduced sequentially so the result is bit-exact for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ModelParams, OffsetWeights};
use crate::online_dp::two_expert::ValueTable;
use crate::policies::Decision;

#[derive(Debug, Clone, PartialEq)]
pub struct MCResult {
    pub trials: usize,
    pub mean: f64,
    /// Sample standard deviation over `√trials`; zero for a single trial or
    /// an exact (unsampled) value.
    pub stderr: f64,
    pub seed: u64,
    pub per_trial: Option<Vec<f64>>,
}

impl MCResult {
    pub fn from_samples(samples: Vec<f64>, seed: u64) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
            (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            trials: n,
            mean,
            stderr,
            seed,
            per_trial: Some(samples),
        }
    }

    /// An exact value reported in the same shape as an estimate.
    pub fn exact(value: f64, seed: u64) -> Self {
        Self {
            trials: 0,
            mean: value,
            stderr: 0.0,
            seed,
            per_trial: None,
        }
    }
}

/// Generator for trial number `trial` under root `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub(crate) fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        Err(Error::invalid("trials", 0, "at least one trial required"))
    } else {
        Ok(())
    }
}

/// Runs `trials` in parallel and reduces in trial order.
pub(crate) fn run_trials(trials: usize, seed: u64, trial: impl Fn(&mut ChaCha8Rng) -> f64 + Sync) -> MCResult {
    let samples: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| trial(&mut trial_rng(seed, t)))
        .collect();
    MCResult::from_samples(samples, seed)
}

/// Plays the tabulated online policy against a simulated honest expert of
/// accuracy `μ` and records the total loss of each episode.
pub fn simulate_online(params: &ModelParams, table: &ValueTable, trials: usize, seed: u64) -> Result<MCResult> {
    if !table.matches(params) {
        return Err(Error::TableMismatch);
    }
    check_trials(trials)?;
    let n = params.horizon();
    let mu = params.mu();
    let weights = OffsetWeights::new(params, n);
    Ok(run_trials(trials, seed, |rng| {
        let mut j = 0i64;
        let mut total = 0.0;
        for k in 0..n {
            let rho = weights.get(j);
            let honest_right = rng.gen::<f64>() < mu;
            match (table.action(k, j).expect("offset within table"), honest_right) {
                (Decision::Lie, true) => {
                    total += rho;
                    j += 1;
                }
                (Decision::Lie, false) => total += 1.0,
                (Decision::Truth, true) => {}
                (Decision::Truth, false) => {
                    total += 1.0 - rho;
                    j -= 1;
                }
            }
        }
        total
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::online_dp::two_expert::solve_two_expert;

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let a: u64 = trial_rng(7, 0).gen();
        let b: u64 = trial_rng(7, 1).gen();
        let c: u64 = trial_rng(7, 0).gen();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn sample_statistics() {
        let r = MCResult::from_samples(vec![1.0, 2.0, 3.0, 4.0], 0);
        assert_eq!(r.mean, 2.5);
        assert!((r.stderr - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(MCResult::from_samples(vec![3.0], 0).stderr, 0.0);
    }

    #[test]
    fn nearly_perfect_honest_expert() {
        let p = ModelParams::new((-1.0f64).exp(), 0.999, 5, 0.5).unwrap();
        let t = solve_two_expert(&p).unwrap();
        let r = simulate_online(&p, &t, 20_000, 11).unwrap();
        assert!((r.mean - t.root_value()).abs() <= 3.0 * r.stderr.max(1e-12) + 1e-9);
    }

    #[test]
    fn deterministic_and_checked() {
        let p = ModelParams::standard(12).unwrap();
        let t = solve_two_expert(&p).unwrap();
        assert_eq!(simulate_online(&p, &t, 500, 3), simulate_online(&p, &t, 500, 3));
        let q = p.with_rho0(0.4).unwrap();
        assert_eq!(simulate_online(&q, &t, 5, 3), Err(Error::TableMismatch));
        assert!(simulate_online(&p, &t, 0, 3).is_err());
    }
}
