//! Enumeration oracles: the expected loss of a fixed policy by summing over
//! every honest sample path, and the best offline policy by searching over
//! every decision sequence.

use crate::error::{Error, Result};
use crate::exact_eval::closed_form::stage_losses;
use crate::model::{mw_step, system_prediction, ExpertState, ModelParams, OffsetWeights};
use crate::policies::{Decision, OfflinePolicy};

pub const MAX_BRUTE_FORCE_HORIZON: usize = 22;
pub const MAX_EXHAUSTIVE_HORIZON: usize = 26;

fn guard(what: &'static str, limit: usize, requested: usize) -> Result<()> {
    if requested > limit {
        Err(Error::Guard {
            what,
            limit: limit as u64,
            requested: requested as u64,
        })
    } else {
        Ok(())
    }
}

/// Expected total loss by simulating the two-expert system along all `2^N`
/// honest correctness paths.
///
/// Outcomes alternate `1, 0, 1, …`; the loss does not depend on them.
pub fn brute_force_value(policy: &OfflinePolicy, params: &ModelParams) -> Result<f64> {
    guard("brute-force horizon", MAX_BRUTE_FORCE_HORIZON, params.horizon())?;
    policy.check_horizon(params.horizon())?;
    let start = ExpertState::new(vec![params.rho0(), 1.0 - params.rho0()])?;
    path_sum(&start, policy.decisions(), params, 1.0)
}

fn path_sum(state: &ExpertState, rest: &[Decision], params: &ModelParams, prob: f64) -> Result<f64> {
    let Some((&decision, rest)) = rest.split_first() else {
        return Ok(0.0);
    };
    let y = (1 - state.stage() % 2) as u8;
    let adversary = match decision {
        Decision::Lie => 1 - y,
        Decision::Truth => y,
    };
    let mu = params.mu();
    let mut total = 0.0;
    for (honest, p) in [(y, mu), (1 - y, 1.0 - mu)] {
        let preds = [adversary, honest];
        let y_hat = system_prediction(state, &preds)?;
        let here = params.loss().eval((y_hat - y as f64).abs());
        let next = mw_step(state, &preds, y, params.epsilon())?;
        total += prob * p * here + path_sum(&next, rest, params, prob * p)?;
    }
    Ok(total)
}

struct Search {
    horizon: usize,
    mu: f64,
    lie_loss: Vec<f64>,
    truth_loss: Vec<f64>,
    // one offset law per depth, indexed by j + horizon
    layers: Vec<Vec<f64>>,
    path: Vec<Decision>,
    best: f64,
    best_path: Vec<Decision>,
}

impl Search {
    fn run(&mut self, depth: usize, lies: usize, truths: usize, acc: f64) {
        if depth == self.horizon {
            if acc > self.best {
                self.best = acc;
                self.best_path.clone_from(&self.path);
            }
            return;
        }
        let off = self.horizon;
        let (lo, hi) = (off - truths, off + lies);
        for decision in [Decision::Lie, Decision::Truth] {
            let (cur, next) = {
                let (a, b) = self.layers.split_at_mut(depth + 1);
                (&a[depth], &mut b[0])
            };
            let stage = match decision {
                Decision::Lie => &self.lie_loss,
                Decision::Truth => &self.truth_loss,
            };
            let mut expected = 0.0;
            for idx in lo..=hi {
                expected += cur[idx] * stage[idx];
            }
            let (nlo, nhi) = match decision {
                Decision::Lie => (lo, hi + 1),
                Decision::Truth => (lo - 1, hi),
            };
            next[nlo..=nhi].iter_mut().for_each(|x| *x = 0.0);
            for idx in lo..=hi {
                let mass = cur[idx];
                match decision {
                    Decision::Lie => {
                        next[idx + 1] += self.mu * mass;
                        next[idx] += (1.0 - self.mu) * mass;
                    }
                    Decision::Truth => {
                        next[idx - 1] += (1.0 - self.mu) * mass;
                        next[idx] += self.mu * mass;
                    }
                }
            }
            self.path.push(decision);
            match decision {
                Decision::Lie => self.run(depth + 1, lies + 1, truths, acc + expected),
                Decision::Truth => self.run(depth + 1, lies, truths + 1, acc + expected),
            }
            self.path.pop();
        }
    }
}

/// Best offline policy and its value over all `2^N` decision sequences.
///
/// Depth-first over decision prefixes, carrying the exact offset law and the
/// accumulated expected loss, so each node costs time linear in its depth.
/// Exact ties keep the lexicographically earlier sequence with `Lie < Truth`.
pub fn exhaustive_offline_optimum(params: &ModelParams) -> Result<(OfflinePolicy, f64)> {
    let n = params.horizon();
    guard("exhaustive offline horizon", MAX_EXHAUSTIVE_HORIZON, n)?;
    let weights = OffsetWeights::new(params, n);
    let (lie_loss, truth_loss) = (-(n as i64)..=n as i64)
        .map(|j| stage_losses(params.loss(), params.mu(), weights.get(j)))
        .unzip();
    let mut layers = vec![vec![0.0; 2 * n + 1]; n + 1];
    layers[0][n] = 1.0;
    let mut search = Search {
        horizon: n,
        mu: params.mu(),
        lie_loss,
        truth_loss,
        layers,
        path: Vec::with_capacity(n),
        best: f64::NEG_INFINITY,
        best_path: Vec::new(),
    };
    search.run(0, 0, 0, 0.0);
    Ok((OfflinePolicy::new(search.best_path), search.best))
}
