use crate::error::{Error, Result};
use crate::exact_eval::offset::OffsetDistribution;
use crate::model::{binomial, power_unchecked, BinomialDist, Loss, ModelParams, OffsetWeights};
use crate::policies::{BlockForm, OfflinePolicy};

fn check_rho(rho: f64) -> Result<f64> {
    if rho.is_finite() && rho > 0.0 && rho < 1.0 {
        Ok(rho)
    } else {
        Err(Error::WeightDomain(rho))
    }
}

/// Expected loss of lying for `n` consecutive stages starting from relative
/// weight `rho`:
///
/// ```text
/// V^f_n(ρ) = n(1-μ)Q(1) + Σ_j P(Z > j) Q(g^(j)(ρ)),   Z ~ Bin(n, μ)
/// ```
pub fn value_false(n: usize, rho: f64, params: &ModelParams) -> Result<f64> {
    let rho = check_rho(rho)?;
    let z = binomial(n, params.mu());
    let eps = params.epsilon();
    Ok(false_run(n, &z, params, |i| power_unchecked(i, rho, eps)))
}

/// Expected loss of telling the truth for `n` consecutive stages from `rho`:
///
/// ```text
/// V^t_n(ρ) = nμQ(0) + Σ_j P(W > j) Q(1 - g^(-j)(ρ)),   W ~ Bin(n, 1-μ)
/// ```
pub fn value_true(n: usize, rho: f64, params: &ModelParams) -> Result<f64> {
    let rho = check_rho(rho)?;
    let w = binomial(n, 1.0 - params.mu());
    let eps = params.epsilon();
    Ok(true_run(n, &w, params, |i| power_unchecked(-i, rho, eps)))
}

/// `weight(i)` must return the adversary weight after `i` caught lies.
fn false_run(n: usize, z: &BinomialDist, params: &ModelParams, weight: impl Fn(i64) -> f64) -> f64 {
    let loss = params.loss();
    let wrong = n as f64 * (1.0 - params.mu()) * loss.eval(1.0);
    let caught: f64 = (0..n as i64).map(|i| z.tail_gt(i) * loss.eval(weight(i))).sum();
    wrong + caught
}

/// `weight(i)` must return the adversary weight after `i` rewarded truths.
fn true_run(n: usize, w: &BinomialDist, params: &ModelParams, weight: impl Fn(i64) -> f64) -> f64 {
    let loss = params.loss();
    let right = n as f64 * params.mu() * loss.eval(0.0);
    let split: f64 = (0..n as i64).map(|i| w.tail_gt(i) * loss.eval(1.0 - weight(i))).sum();
    right + split
}

/// Exact expected loss of a block policy from `ρ₀`.
///
/// The offset law is carried block to block; each block contributes the
/// expectation of the single-run closed form over that law.
pub fn value_block_policy(blocks: &BlockForm, params: &ModelParams) -> Result<f64> {
    blocks.check_horizon(params.horizon())?;
    let weights = OffsetWeights::new(params, params.horizon());
    let mu = params.mu();
    let mut dist = OffsetDistribution::point(0);
    let mut total = 0.0;
    for &(n, m) in blocks.blocks() {
        if n > 0 {
            let z = binomial(n, mu);
            total += dist.expect(|j| false_run(n, &z, params, |i| weights.get(j + i)));
            dist = dist.after_lies(n, mu);
        }
        if m > 0 {
            let w = binomial(m, 1.0 - mu);
            total += dist.expect(|j| true_run(m, &w, params, |i| weights.get(j - i)));
            dist = dist.after_truths(m, mu);
        }
    }
    Ok(total)
}

pub fn value_policy(policy: &OfflinePolicy, params: &ModelParams) -> Result<f64> {
    value_block_policy(&policy.block_form(), params)
}

/// Per-stage expected losses of lying and of telling the truth at relative
/// weight `rho`, for a general loss.
#[inline]
pub(crate) fn stage_losses(loss: &Loss, mu: f64, rho: f64) -> (f64, f64) {
    let lie = (1.0 - mu) * loss.eval(1.0) + mu * loss.eval(rho);
    let truth = mu * loss.eval(0.0) + (1.0 - mu) * loss.eval(1.0 - rho);
    (lie, truth)
}
