//! Backward induction for the optimal online adversary against one honest
//! expert, over the integer weight offset.
//!
//! At stage `k` the reachable offsets are exactly `-k ..= k`. With relative
//! weight `ρ = g^(j)(ρ₀)` and continuation values `V` from stage `k + 1`:
//!
//! ```text
//! lie   = 1 - μ + μρ     + μ V(j+1) + (1-μ) V(j)
//! truth = (1-μ)(1-ρ)     + (1-μ) V(j-1) + μ V(j)
//! ```

use crate::error::{Error, Result};
use crate::model::{ModelParams, OffsetWeights};
use crate::policies::Decision;

/// Branches closer than this, relative to `1 + |lie|`, count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    horizon: usize,
    // (epsilon, mu, rho0) the table was solved for
    key: (f64, f64, f64),
    // values[k][j + k] for j in -k..=k, k in 0..=horizon
    values: Vec<Vec<f64>>,
    actions: Vec<Vec<Decision>>,
    ties: Vec<Vec<bool>>,
    states_evaluated: u64,
}

impl ValueTable {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    fn slot(k: usize, j: i64) -> Option<usize> {
        let idx = j + k as i64;
        (idx >= 0 && idx <= 2 * k as i64).then_some(idx as usize)
    }

    /// `V*_k` at offset `j`; `None` outside `-k ..= k` or past the horizon.
    pub fn value(&self, k: usize, j: i64) -> Option<f64> {
        let row = self.values.get(k)?;
        Self::slot(k, j).map(|i| row[i])
    }

    /// Maximizing action at `(k, j)` for `k < N`, ties resolved to `Lie`.
    pub fn action(&self, k: usize, j: i64) -> Option<Decision> {
        let row = self.actions.get(k)?;
        Self::slot(k, j).map(|i| row[i])
    }

    pub fn is_tie(&self, k: usize, j: i64) -> Option<bool> {
        let row = self.ties.get(k)?;
        Self::slot(k, j).map(|i| row[i])
    }

    /// Row of stage `k`, indexed by `j + k`.
    pub fn stage_values(&self, k: usize) -> &[f64] {
        &self.values[k]
    }

    pub fn root_value(&self) -> f64 {
        self.values[0][0]
    }

    /// Number of `(k, j)` states at which both branches were evaluated.
    pub fn states_evaluated(&self) -> u64 {
        self.states_evaluated
    }

    pub fn tie_count(&self) -> usize {
        self.ties.iter().flatten().filter(|&&t| t).count()
    }

    /// Whether this table was solved for exactly these parameters.
    pub fn matches(&self, params: &ModelParams) -> bool {
        self.horizon == params.horizon()
            && self.key == (params.epsilon(), params.mu(), params.rho0())
            && params.loss().is_absolute()
    }
}

/// The two branch values at `(k, j)`, recomputed from the stored stage
/// `k + 1` row. Used to check Bellman consistency independently of the
/// solver's own bookkeeping.
pub fn branch_values(table: &ValueTable, k: usize, j: i64, params: &ModelParams) -> Result<(f64, f64)> {
    if !table.matches(params) {
        return Err(Error::TableMismatch);
    }
    if k >= table.horizon || j.unsigned_abs() as usize > k {
        return Err(Error::invalid("(k, j)", format!("({k}, {j})"), "state outside the table"));
    }
    let next = |j: i64| table.value(k + 1, j).expect("successor inside stage k+1");
    let rho = crate::model::weight_power(j, params.rho0(), params)?;
    let mu = params.mu();
    let lie = 1.0 - mu + mu * rho + mu * next(j + 1) + (1.0 - mu) * next(j);
    let truth = (1.0 - mu) * (1.0 - rho) + (1.0 - mu) * next(j - 1) + mu * next(j);
    Ok((lie, truth))
}

pub fn solve_two_expert(params: &ModelParams) -> Result<ValueTable> {
    if !params.loss().is_absolute() {
        return Err(Error::UnsupportedLoss);
    }
    let n = params.horizon();
    let mu = params.mu();
    let weights = OffsetWeights::new(params, n);

    let mut values: Vec<Vec<f64>> = (0..=n).map(|k| vec![0.0; 2 * k + 1]).collect();
    let mut actions: Vec<Vec<Decision>> = (0..n).map(|k| vec![Decision::Lie; 2 * k + 1]).collect();
    let mut ties: Vec<Vec<bool>> = (0..n).map(|k| vec![false; 2 * k + 1]).collect();
    let mut states = 0u64;

    for k in (0..n).rev() {
        let (head, tail) = values.split_at_mut(k + 1);
        let (row, next) = (&mut head[k], &tail[0]);
        for i in 0..=2 * k {
            let j = i as i64 - k as i64;
            let rho = weights.get(j);
            // successor offsets j-1, j, j+1 sit at indices i, i+1, i+2 of stage k+1
            let (down, stay, up) = (next[i], next[i + 1], next[i + 2]);
            let lie = 1.0 - mu + mu * rho + mu * up + (1.0 - mu) * stay;
            let truth = (1.0 - mu) * (1.0 - rho) + (1.0 - mu) * down + mu * stay;
            let tie = (lie - truth).abs() <= TIE_TOLERANCE * (1.0 + lie.abs());
            row[i] = lie.max(truth);
            actions[k][i] = if tie || lie > truth { Decision::Lie } else { Decision::Truth };
            ties[k][i] = tie;
            states += 1;
        }
    }

    Ok(ValueTable {
        horizon: n,
        key: (params.epsilon(), mu, params.rho0()),
        values,
        actions,
        ties,
        states_evaluated: states,
    })
}

/// Root value `V*_0` of [`solve_two_expert`].
pub fn optimal_value(params: &ModelParams) -> Result<f64> {
    solve_two_expert(params).map(|t| t.root_value())
}
