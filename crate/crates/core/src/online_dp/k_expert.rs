//! One adversary against `K - 1` independent honest experts.
//!
//! Under multiplicative weights each expert's weight is `w0ᵢ · ε^cᵢ` where
//! `cᵢ` is its mistake count, so the mistake-count vector is a sufficient
//! state. Normalized weights are unchanged by subtracting a common count,
//! and honest experts sharing both accuracy and initial weight are
//! interchangeable, so states are stored with the minimum count removed and
//! counts sorted within each such class.

use rand::Rng;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::online_dp::monte_carlo::{check_trials, run_trials, MCResult};

pub const MAX_EXPERTS: usize = 5;
pub const MAX_HORIZON: usize = 60;
/// Upper limit on the total number of canonical states the exact solver may
/// visit across all stages.
pub const MAX_STATES: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct KExpertParams {
    epsilon: f64,
    horizon: usize,
    accuracies: Vec<f64>,
    initial_weights: Vec<f64>,
}

impl KExpertParams {
    /// `accuracies` lists the `K - 1` honest experts; `initial_weights` has
    /// `K` entries with the adversary first.
    pub fn new(epsilon: f64, horizon: usize, accuracies: Vec<f64>, initial_weights: Vec<f64>) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::invalid("epsilon", epsilon, "must lie in (0, 1)"));
        }
        if accuracies.is_empty() {
            return Err(Error::invalid("accuracies", "[]", "at least one honest expert required"));
        }
        if let Some(mu) = accuracies.iter().find(|m| !(**m > 0.0 && **m < 1.0)) {
            return Err(Error::invalid("accuracies", mu, "each accuracy must lie in (0, 1)"));
        }
        if initial_weights.len() != accuracies.len() + 1 {
            return Err(Error::DimensionMismatch {
                expected: accuracies.len() + 1,
                got: initial_weights.len(),
            });
        }
        if let Some(w) = initial_weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::invalid("initial_weights", w, "weights must be finite and positive"));
        }
        Ok(Self {
            epsilon,
            horizon,
            accuracies,
            initial_weights,
        })
    }

    /// Adversary holds relative weight `share`; honest experts split the rest
    /// equally.
    pub fn with_adversary_share(epsilon: f64, horizon: usize, accuracies: Vec<f64>, share: f64) -> Result<Self> {
        if !(share > 0.0 && share < 1.0) {
            return Err(Error::invalid("adversary_weight", share, "must lie in (0, 1)"));
        }
        let honest = (1.0 - share) / accuracies.len() as f64;
        let mut weights = vec![share];
        weights.extend(std::iter::repeat_n(honest, accuracies.len()));
        Self::new(epsilon, horizon, accuracies, weights)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn accuracies(&self) -> &[f64] {
        &self.accuracies
    }

    pub fn initial_weights(&self) -> &[f64] {
        &self.initial_weights
    }

    /// Total number of experts `K`.
    pub fn experts(&self) -> usize {
        self.initial_weights.len()
    }

    /// Adversary's initial share of the total weight.
    pub fn adversary_share(&self) -> f64 {
        self.initial_weights[0] / self.initial_weights.iter().sum::<f64>()
    }

    pub fn mean_accuracy(&self) -> f64 {
        self.accuracies.iter().sum::<f64>() / self.accuracies.len() as f64
    }

    /// Two-expert model with the honest experts merged into one of mean
    /// accuracy holding the remaining weight.
    pub fn two_expert_surrogate(&self) -> Result<ModelParams> {
        ModelParams::new(self.epsilon, self.mean_accuracy(), self.horizon, self.adversary_share())
    }

    pub fn with_horizon(&self, horizon: usize) -> Self {
        Self {
            horizon,
            ..self.clone()
        }
    }
}

/// Number of canonical states at stage `k` whose counts all lie in
/// `0..=k` (minimum not yet removed), for the given class sizes.
fn states_within(k: u64, classes: &[usize]) -> u64 {
    // multisets of size s from k+1 values: C(k + s, s)
    classes.iter().fold(1u64, |acc, &s| {
        let mut c = 1u128;
        for i in 1..=s as u128 {
            c = c * (k as u128 + i) / i;
        }
        acc.saturating_mul(c.min(u64::MAX as u128) as u64)
    })
}

/// Canonical states visited by [`solve_k_expert`] over the whole horizon.
pub fn k_expert_state_count(params: &KExpertParams) -> u64 {
    let layout = Layout::new(params);
    match params.horizon {
        0 => 0,
        n => states_within(n as u64 - 1, &layout.class_sizes),
    }
}

/// Honest experts reordered so that interchangeable ones are contiguous.
struct Layout {
    /// Expert order, adversary first.
    order: Vec<usize>,
    /// Sizes of consecutive classes in `order`, the adversary's class first.
    class_sizes: Vec<usize>,
}

impl Layout {
    fn new(params: &KExpertParams) -> Self {
        let k = params.experts();
        let key = |i: usize| (params.accuracies[i - 1].to_bits(), params.initial_weights[i].to_bits());
        let mut honest: Vec<usize> = (1..k).collect();
        honest.sort_by_key(|&i| key(i));
        let mut class_sizes = vec![1];
        for (n, &i) in honest.iter().enumerate() {
            if n > 0 && key(honest[n - 1]) == key(i) {
                *class_sizes.last_mut().expect("adversary class present") += 1;
            } else {
                class_sizes.push(1);
            }
        }
        let mut order = vec![0];
        order.extend(honest);
        Self { order, class_sizes }
    }
}

struct Solver {
    experts: usize,
    class_bounds: Vec<(usize, usize)>,
    w0: Vec<f64>,
    mu: Vec<f64>,
    ln_eps: f64,
}

impl Solver {
    fn new(params: &KExpertParams) -> Self {
        let layout = Layout::new(params);
        let mut class_bounds = Vec::new();
        let mut start = 0;
        for &s in &layout.class_sizes {
            class_bounds.push((start, start + s));
            start += s;
        }
        let w0 = layout.order.iter().map(|&i| params.initial_weights[i]).collect();
        let mu = layout.order.iter().skip(1).map(|&i| params.accuracies[i - 1]).collect();
        Self {
            experts: params.experts(),
            class_bounds,
            w0,
            mu,
            ln_eps: params.epsilon.ln(),
        }
    }

    fn canonical(&self, counts: &mut [u8]) -> u64 {
        let min = *counts.iter().min().expect("nonempty");
        counts.iter_mut().for_each(|c| *c -= min);
        for &(a, b) in &self.class_bounds {
            counts[a..b].sort_unstable();
        }
        counts.iter().fold(0u64, |acc, &c| (acc << 8) | c as u64)
    }

    /// All canonical states at stage `k`: counts in `0..=k`, minimum zero,
    /// nondecreasing within each class.
    fn enumerate(&self, k: u8) -> Vec<[u8; MAX_EXPERTS]> {
        let mut out = Vec::new();
        let mut cur = [0u8; MAX_EXPERTS];
        self.fill(0, 0, k, &mut cur, &mut out);
        out
    }

    fn fill(&self, pos: usize, floor: u8, k: u8, cur: &mut [u8; MAX_EXPERTS], out: &mut Vec<[u8; MAX_EXPERTS]>) {
        if pos == self.experts {
            if cur[..self.experts].contains(&0) {
                out.push(*cur);
            }
            return;
        }
        let starts_class = self.class_bounds.iter().any(|&(a, _)| a == pos);
        let lo = if starts_class { 0 } else { floor };
        for c in lo..=k {
            cur[pos] = c;
            self.fill(pos + 1, c, k, cur, out);
        }
    }

    fn solve(&self, horizon: usize) -> f64 {
        let honest = self.experts - 1;
        let outcomes: Vec<(u32, f64)> = (0..1u32 << honest)
            .map(|mask| {
                // bit i set: honest expert i is right
                let p = (0..honest)
                    .map(|i| if mask >> i & 1 == 1 { self.mu[i] } else { 1.0 - self.mu[i] })
                    .product();
                (mask, p)
            })
            .collect();

        let mut next: FxHashMap<u64, f64> = FxHashMap::default();
        for k in (0..horizon).rev() {
            let states = self.enumerate(k as u8);
            let mut here = FxHashMap::with_capacity_and_hasher(states.len(), Default::default());
            for state in states {
                let counts = &state[..self.experts];
                let p: Vec<f64> = counts
                    .iter()
                    .zip(&self.w0)
                    .map(|(&c, w)| w * (c as f64 * self.ln_eps).exp())
                    .collect();
                let total: f64 = p.iter().sum();
                let truth_now: f64 = (0..honest).map(|i| (1.0 - self.mu[i]) * p[i + 1]).sum::<f64>() / total;
                let lie_now = truth_now + p[0] / total;
                let (mut lie, mut truth) = (lie_now, truth_now);
                if k + 1 < horizon {
                    for &(mask, prob) in &outcomes {
                        let mut after = [0u8; MAX_EXPERTS];
                        after[..self.experts].copy_from_slice(counts);
                        for i in 0..honest {
                            if mask >> i & 1 == 0 {
                                after[i + 1] += 1;
                            }
                        }
                        let mut t = after;
                        let truth_key = self.canonical(&mut t[..self.experts]);
                        after[0] += 1;
                        let lie_key = self.canonical(&mut after[..self.experts]);
                        truth += prob * next[&truth_key];
                        lie += prob * next[&lie_key];
                    }
                }
                let mut key_counts = state;
                let key = self.canonical(&mut key_counts[..self.experts]);
                here.insert(key, lie.max(truth));
            }
            next = here;
        }
        match horizon {
            0 => 0.0,
            _ => next[&0],
        }
    }
}

/// Exact optimal online expected loss of the adversary against `K - 1`
/// independent honest experts, by backward induction over canonical
/// mistake-count states.
pub fn solve_k_expert(params: &KExpertParams) -> Result<f64> {
    let k = params.experts();
    if k > MAX_EXPERTS {
        return Err(Error::Guard {
            what: "experts",
            limit: MAX_EXPERTS as u64,
            requested: k as u64,
        });
    }
    if params.horizon > MAX_HORIZON {
        return Err(Error::Guard {
            what: "multi-expert horizon",
            limit: MAX_HORIZON as u64,
            requested: params.horizon as u64,
        });
    }
    let states = k_expert_state_count(params);
    if states > MAX_STATES {
        return Err(Error::Guard {
            what: "multi-expert state count",
            limit: MAX_STATES,
            requested: states,
        });
    }
    Ok(Solver::new(params).solve(params.horizon))
}

/// Best total loss against one known realization of the honest experts.
///
/// `realized[i][k]` is whether honest expert `i` is right at stage `k`. The
/// honest weights are then fixed in advance and only the adversary's own
/// mistake count `c ≤ k` remains as state.
pub fn clairvoyant_value(realized: &[Vec<bool>], params: &KExpertParams) -> Result<f64> {
    let honest = params.experts() - 1;
    if realized.len() != honest {
        return Err(Error::DimensionMismatch {
            expected: honest,
            got: realized.len(),
        });
    }
    let n = params.horizon;
    if let Some(row) = realized.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: row.len(),
        });
    }
    let ln_eps = params.epsilon.ln();
    let ln_w0: Vec<f64> = params.initial_weights.iter().map(|w| w.ln()).collect();

    // honest (wrong mass, total mass) per stage, relative to a per-stage scale
    let mut scale = Vec::with_capacity(n);
    let mut stage_mass = Vec::with_capacity(n);
    let mut mistakes = vec![0u32; honest];
    for k in 0..n {
        let logs: Vec<f64> = (0..honest).map(|i| ln_w0[i + 1] + mistakes[i] as f64 * ln_eps).collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (mut wrong, mut all) = (0.0, 0.0);
        for i in 0..honest {
            let w = (logs[i] - top).exp();
            all += w;
            if !realized[i][k] {
                wrong += w;
                mistakes[i] += 1;
            }
        }
        scale.push(top);
        stage_mass.push((wrong, all));
    }

    let mut next = vec![0.0; n + 1];
    for k in (0..n).rev() {
        let (wrong, all) = stage_mass[k];
        let mut here = vec![0.0; k + 1];
        for (c, v) in here.iter_mut().enumerate() {
            let adv = (ln_w0[0] + c as f64 * ln_eps - scale[k]).exp();
            let lie = (adv + wrong) / (adv + all) + next[c + 1];
            let truth = wrong / (adv + all) + next[c];
            *v = lie.max(truth);
        }
        next = here;
    }
    Ok(next[0])
}

/// Draws one realization: `realized[i][k]` is true with probability `μᵢ`.
pub fn sample_realization(params: &KExpertParams, rng: &mut impl Rng) -> Vec<Vec<bool>> {
    let mut realized = vec![Vec::with_capacity(params.horizon); params.accuracies.len()];
    for _ in 0..params.horizon {
        for (row, &mu) in realized.iter_mut().zip(&params.accuracies) {
            row.push(rng.gen::<f64>() < mu);
        }
    }
    realized
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Average of the clairvoyant optimum over sampled realizations.
    Clairvoyant,
    /// The exact online optimum, unsampled.
    ExactDp,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Clairvoyant => "clairvoyant",
            Mode::ExactDp => "exact_dp",
        }
    }
}

pub fn monte_carlo_k_expert(params: &KExpertParams, trials: usize, seed: u64, mode: Mode) -> Result<MCResult> {
    check_trials(trials)?;
    match mode {
        Mode::ExactDp => solve_k_expert(params).map(|v| MCResult::exact(v, seed)),
        Mode::Clairvoyant => Ok(run_trials(trials, seed, |rng| {
            let realized = sample_realization(params, rng);
            clairvoyant_value(&realized, params).expect("realization sized from params")
        })),
    }
}
