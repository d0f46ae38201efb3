//! The bonus a block policy earns over lying throughout: the sum over blocks
//! of `E[σ(X_ℓ - Y_ℓ)] - E[σ(X_ℓ - Y_{ℓ-1})]` with `σ(t) = 1/(1+e^t)`,
//! where `X_ℓ ~ Bin(N_ℓ, μ)` counts caught lies in the first `ℓ` lie blocks
//! and `Y_ℓ ~ Bin(M_ℓ, 1-μ)` counts rewarded truths in the first `ℓ` truth
//! blocks.
//!
//! Offsets are exponentiated in base `e`. For another `ε` every offset is
//! scaled by `ln(1/ε)`; that rescaling is not applied here.

use crate::exact_eval::offset::OffsetDistribution;
use crate::model::{std_normal_cdf, ModelParams};
use crate::policies::BlockForm;

/// Means and standard deviations of the normal stand-ins for
/// `X_ℓ - Y_ℓ` (even) and `X_ℓ - Y_{ℓ-1}` (odd).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockMoments {
    pub mean_even: f64,
    pub sd_even: f64,
    pub mean_odd: f64,
    pub sd_odd: f64,
}

/// One summand of the bonus, exact and approximated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BonusTerm {
    pub exact: f64,
    pub normal_approx: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BonusReport {
    pub exact: f64,
    pub normal_approx: f64,
    pub per_block_terms: Vec<BonusTerm>,
    pub means_sds: Vec<BlockMoments>,
}

/// `1/(1+e^t)` without overflow.
pub(crate) fn logistic_base_e(t: f64) -> f64 {
    if t > 0.0 {
        let e = (-t).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + t.exp())
    }
}

/// `Φ(-mean/sd)`, reading a zero-variance law as a point mass at `mean`.
fn normal_tail(mean: f64, sd: f64) -> f64 {
    if sd > 0.0 {
        std_normal_cdf(-mean / sd)
    } else if mean > 0.0 {
        0.0
    } else if mean < 0.0 {
        1.0
    } else {
        0.5
    }
}

pub fn bonus_term(blocks: &BlockForm, params: &ModelParams) -> BonusReport {
    let mu = params.mu();
    let var = mu * (1.0 - mu);
    let mut dist = OffsetDistribution::point(0);
    let (mut lies, mut truths) = (0usize, 0usize);
    let mut per_block_terms = Vec::with_capacity(blocks.blocks().len());
    let mut means_sds = Vec::with_capacity(blocks.blocks().len());
    for &(n, m) in blocks.blocks() {
        dist = dist.after_lies(n, mu);
        lies += n;
        let before = dist.expect(|j| logistic_base_e(j as f64));
        let mean_odd = lies as f64 * mu - truths as f64 * (1.0 - mu);
        let sd_odd = (var * (lies + truths) as f64).sqrt();

        dist = dist.after_truths(m, mu);
        truths += m;
        let after = dist.expect(|j| logistic_base_e(j as f64));
        let mean_even = lies as f64 * mu - truths as f64 * (1.0 - mu);
        let sd_even = (var * (lies + truths) as f64).sqrt();

        per_block_terms.push(BonusTerm {
            exact: after - before,
            normal_approx: normal_tail(mean_even, sd_even) - normal_tail(mean_odd, sd_odd),
        });
        means_sds.push(BlockMoments {
            mean_even,
            sd_even,
            mean_odd,
            sd_odd,
        });
    }
    BonusReport {
        exact: per_block_terms.iter().map(|t| t.exact).sum(),
        normal_approx: per_block_terms.iter().map(|t| t.normal_approx).sum(),
        per_block_terms,
        means_sds,
    }
}
