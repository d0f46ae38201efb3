//! Reference systems: an adversary that flips a fair coin at every stage, and
//! a system whose second expert is honest too.

use crate::error::{Error, Result};
use crate::model::{ModelParams, OffsetWeights};

/// Expected loss at weight `ρ` conditional on the honest expert being right
/// or wrong folded together, for an adversary that tells the truth with
/// probability `q`: returns the two expressions `1-μ+μρ-qρ` and
/// `1-μ+μρ-(1-q)ρ`, which coincide exactly at `q = 1/2`.
pub fn conditional_losses(mu: f64, rho: f64, q: f64) -> (f64, f64) {
    let base = 1.0 - mu + mu * rho;
    (base - q * rho, base - (1.0 - q) * rho)
}

/// Per-stage expected loss of the fair-coin adversary at weight `ρ`.
pub fn coin_flip_stage_loss(mu: f64, rho: f64) -> f64 {
    1.0 - mu + mu * rho - 0.5 * rho
}

/// Exact expected total loss when the adversary lies or tells the truth
/// with probability 1/2 each, independently of everything else.
///
/// The offset moves up with probability `μ/2` (lie caught), down with
/// probability `(1-μ)/2` (truth rewarded), and stays put otherwise.
pub fn no_information_baseline(params: &ModelParams) -> Result<f64> {
    if !params.loss().is_absolute() {
        return Err(Error::UnsupportedLoss);
    }
    let n = params.horizon();
    let mu = params.mu();
    let weights = OffsetWeights::new(params, n);
    let (up, down) = (0.5 * mu, 0.5 * (1.0 - mu));
    let stay = 1.0 - up - down;
    // law over offsets -n..=n, index j + n
    let mut law = vec![0.0; 2 * n + 3];
    law[n + 1] = 1.0;
    let mut next = law.clone();
    let mut total = 0.0;
    for k in 0..n {
        let (lo, hi) = (n + 1 - k, n + 1 + k);
        for i in lo..=hi {
            let j = i as i64 - n as i64 - 1;
            total += law[i] * coin_flip_stage_loss(mu, weights.get(j));
        }
        next[lo - 1..=hi + 1].iter_mut().for_each(|x| *x = 0.0);
        for i in lo..=hi {
            next[i + 1] += up * law[i];
            next[i - 1] += down * law[i];
            next[i] += stay * law[i];
        }
        std::mem::swap(&mut law, &mut next);
    }
    Ok(total)
}

/// Expected total loss with the adversary replaced by a second independent
/// honest expert of the same accuracy, starting from weights `ρ₀, 1-ρ₀`.
///
/// Carried through the same offset law as the adversarial system: the first
/// expert's offset moves up when only it errs and down when only the other
/// does. Under the absolute loss every stage costs exactly `1 - μ`.
pub fn no_adversary_value(params: &ModelParams) -> f64 {
    let n = params.horizon();
    let mu = params.mu();
    let loss = params.loss();
    let weights = OffsetWeights::new(params, n);
    let split = mu * (1.0 - mu);
    let both_right = mu * mu * loss.eval(0.0);
    let both_wrong = (1.0 - mu) * (1.0 - mu) * loss.eval(1.0);
    let mut law = vec![0.0; 2 * n + 3];
    law[n + 1] = 1.0;
    let mut next = law.clone();
    let mut total = 0.0;
    for k in 0..n {
        let (lo, hi) = (n + 1 - k, n + 1 + k);
        for i in lo..=hi {
            let rho = weights.get(i as i64 - n as i64 - 1);
            let stage = both_right + both_wrong + split * (loss.eval(rho) + loss.eval(1.0 - rho));
            total += law[i] * stage;
        }
        next[lo - 1..=hi + 1].iter_mut().for_each(|x| *x = 0.0);
        for i in lo..=hi {
            next[i + 1] += split * law[i];
            next[i - 1] += split * law[i];
            next[i] += (1.0 - 2.0 * split) * law[i];
        }
        std::mem::swap(&mut law, &mut next);
    }
    total
}
