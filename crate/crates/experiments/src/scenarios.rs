//! The computational scenarios. Each returns a [`Table`]; writing files is
//! left to [`crate::run`].

use rayon::prelude::*;

use mwadv_core::exact_eval::{bonus_term, exhaustive_offline_optimum, value_false, value_policy, value_true, MAX_EXHAUSTIVE_HORIZON};
use mwadv_core::model::ModelParams;
use mwadv_core::online_dp::{
    monte_carlo_k_expert, no_adversary_value, no_information_baseline, optimal_value, simulate_online,
    solve_two_expert, KExpertParams, Mode, MAX_EXPERTS,
};
use mwadv_core::policies::{false_policy, random_policy, ratio_policy_with, true_policy, OfflinePolicy};
use mwadv_core::Error as CoreError;

use crate::config::ExperimentConfig;
use crate::output::{Cell, Table};

pub type Result<T> = std::result::Result<T, CoreError>;

/// A problem that left one cell blank.
#[derive(Debug, Clone, PartialEq)]
pub struct Notice {
    pub row: usize,
    pub column: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub n: usize,
    pub mu: f64,
    pub rho0: f64,
    pub epsilon: f64,
    pub v_false: f64,
    pub v_true: f64,
    pub v_ratio: f64,
    pub v_offline_opt: Option<f64>,
    pub v_online: f64,
    pub v_no_adversary: f64,
    pub v_no_info: f64,
}

pub const COMPARISON_COLUMNS: [&str; 11] = [
    "N",
    "mu",
    "rho0",
    "epsilon",
    "v_false",
    "v_true",
    "v_ratio",
    "v_offline_opt",
    "v_online",
    "v_no_adversary",
    "v_no_info",
];

impl ComparisonRow {
    pub fn cells(&self) -> Vec<Cell> {
        vec![
            self.n.into(),
            self.mu.into(),
            self.rho0.into(),
            self.epsilon.into(),
            self.v_false.into(),
            self.v_true.into(),
            self.v_ratio.into(),
            self.v_offline_opt.into(),
            self.v_online.into(),
            self.v_no_adversary.into(),
            self.v_no_info.into(),
        ]
    }
}

fn params_grid(config: &ExperimentConfig) -> Result<Vec<ModelParams>> {
    let mut out = Vec::new();
    for &n in &config.horizons {
        for (mu, rho0) in config.grid() {
            out.push(ModelParams::new(config.epsilon, mu, n, rho0)?);
        }
    }
    Ok(out)
}

/// Refuses exhaustive horizons the core would refuse anyway, before any
/// work is done.
pub fn check_guards(config: &ExperimentConfig) -> Result<()> {
    if config.offline_max_n > MAX_EXHAUSTIVE_HORIZON {
        return Err(CoreError::Guard {
            what: "offline_max_n",
            limit: MAX_EXHAUSTIVE_HORIZON as u64,
            requested: config.offline_max_n as u64,
        });
    }
    if let Some(set) = config.accuracy_sets.iter().find(|s| s.len() + 1 > MAX_EXPERTS) {
        return Err(CoreError::Guard {
            what: "experts",
            limit: MAX_EXPERTS as u64,
            requested: set.len() as u64 + 1,
        });
    }
    Ok(())
}

pub fn comparison_row(p: &ModelParams, offline_max_n: usize, max_den: u64) -> Result<(ComparisonRow, Option<String>)> {
    let n = p.horizon();
    let (v_offline_opt, notice) = if n <= offline_max_n {
        match exhaustive_offline_optimum(p) {
            Ok((_, v)) => (Some(v), None),
            Err(e) if e.is_guard() => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        }
    } else {
        (None, None)
    };
    let row = ComparisonRow {
        n,
        mu: p.mu(),
        rho0: p.rho0(),
        epsilon: p.epsilon(),
        v_false: value_false(n, p.rho0(), p)?,
        v_true: value_true(n, p.rho0(), p)?,
        v_ratio: value_policy(&ratio_policy_with(p, max_den).policy, p)?,
        v_offline_opt,
        v_online: optimal_value(p)?,
        v_no_adversary: no_adversary_value(p),
        v_no_info: no_information_baseline(p)?,
    };
    Ok((row, notice))
}

/// One row per `(N, μ, ρ₀)`, computed in parallel and returned in sweep order.
pub fn run_compare(config: &ExperimentConfig) -> Result<(Vec<ComparisonRow>, Vec<Notice>)> {
    check_guards(config)?;
    let grid = params_grid(config)?;
    let results: Vec<_> = grid
        .par_iter()
        .map(|p| comparison_row(p, config.offline_max_n, config.max_denominator))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut notices = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        let (row, notice) = r?;
        if let Some(message) = notice {
            notices.push(Notice {
                row: i,
                column: "v_offline_opt",
                message,
            });
        }
        rows.push(row);
    }
    Ok((rows, notices))
}

pub fn comparison_table(rows: &[ComparisonRow]) -> Table {
    let mut t = Table::new(COMPARISON_COLUMNS.to_vec());
    for r in rows {
        t.push(r.cells());
    }
    t
}

/// The configured `policy`: `false`, `true`, `ratio`, `random` (truth with
/// probability 1/2, seeded), or a literal `F`/`T` string.
pub fn resolve_policy(name: &str, p: &ModelParams, config: &ExperimentConfig) -> Result<OfflinePolicy> {
    let n = p.horizon();
    match name.to_ascii_lowercase().as_str() {
        "false" => Ok(false_policy(n)),
        "true" => Ok(true_policy(n)),
        "ratio" => Ok(ratio_policy_with(p, config.max_denominator).policy),
        "random" => random_policy(n, 0.5, config.seed),
        _ => {
            let policy: OfflinePolicy = name.parse()?;
            policy.check_horizon(n)?;
            Ok(policy)
        }
    }
}

pub const EVAL_COLUMNS: [&str; 10] = [
    "N", "mu", "rho0", "epsilon", "policy", "value", "v_false", "blocks", "bonus_exact", "bonus_normal",
];

pub fn run_eval_offline(config: &ExperimentConfig) -> Result<Table> {
    let grid = params_grid(config)?;
    let rows: Vec<Result<Vec<Cell>>> = grid
        .par_iter()
        .map(|p| {
            let policy = resolve_policy(&config.policy, p, config)?;
            let blocks = policy.block_form();
            let bonus = bonus_term(&blocks, p);
            Ok(vec![
                p.horizon().into(),
                p.mu().into(),
                p.rho0().into(),
                p.epsilon().into(),
                config.policy.as_str().into(),
                value_policy(&policy, p)?.into(),
                value_false(p.horizon(), p.rho0(), p)?.into(),
                blocks.blocks().len().into(),
                bonus.exact.into(),
                bonus.normal_approx.into(),
            ])
        })
        .collect();
    let mut t = Table::new(EVAL_COLUMNS.to_vec());
    for r in rows {
        t.push(r?);
    }
    Ok(t)
}

pub const ONLINE_COLUMNS: [&str; 10] = [
    "N", "mu", "rho0", "epsilon", "v_online", "v_false", "ties", "mc_mean", "mc_stderr", "trials",
];

/// Solves the online DP and, when `trials > 0`, checks it by simulation.
/// Rows run one after another; each simulation is itself parallel.
pub fn run_solve_online(config: &ExperimentConfig) -> Result<Table> {
    let mut t = Table::new(ONLINE_COLUMNS.to_vec());
    for p in params_grid(config)? {
        let table = solve_two_expert(&p)?;
        let (mean, stderr) = if config.trials > 0 {
            let mc = simulate_online(&p, &table, config.trials, config.seed)?;
            (Some(mc.mean), Some(mc.stderr))
        } else {
            (None, None)
        };
        t.push(vec![
            p.horizon().into(),
            p.mu().into(),
            p.rho0().into(),
            p.epsilon().into(),
            table.root_value().into(),
            value_false(p.horizon(), p.rho0(), &p)?.into(),
            table.tie_count().into(),
            mean.into(),
            stderr.into(),
            config.trials.into(),
        ]);
    }
    Ok(t)
}

pub const MULTI_COLUMNS: [&str; 11] = [
    "N",
    "accuracies",
    "adversary_weight",
    "epsilon",
    "mu_two_expert",
    "v_two_expert",
    "v5_clairvoyant",
    "v5_clairvoyant_stderr",
    "trials",
    "v5_exact_dp",
    "seed",
];

/// Per accuracy set and horizon: the two-expert surrogate at the mean
/// accuracy and the adversary's weight share, the clairvoyant estimate, and
/// the exact online value when the state guard allows it.
pub fn run_multi_expert(config: &ExperimentConfig) -> Result<(Table, Vec<Notice>)> {
    check_guards(config)?;
    let mut t = Table::new(MULTI_COLUMNS.to_vec());
    let mut notices = Vec::new();
    for set in &config.accuracy_sets {
        let label = set.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ");
        for &n in &config.horizons {
            let k = KExpertParams::with_adversary_share(config.epsilon, n, set.clone(), config.adversary_weight)?;
            let two = k.two_expert_surrogate()?;
            let clair = monte_carlo_k_expert(&k, config.trials.max(1), config.seed, Mode::Clairvoyant)?;
            let exact = match monte_carlo_k_expert(&k, 1, config.seed, Mode::ExactDp) {
                Ok(r) => Some(r.mean),
                Err(e) if e.is_guard() => {
                    notices.push(Notice {
                        row: t.rows.len(),
                        column: "v5_exact_dp",
                        message: e.to_string(),
                    });
                    None
                }
                Err(e) => return Err(e),
            };
            t.push(vec![
                n.into(),
                label.as_str().into(),
                config.adversary_weight.into(),
                config.epsilon.into(),
                two.mu().into(),
                optimal_value(&two)?.into(),
                clair.mean.into(),
                clair.stderr.into(),
                clair.trials.into(),
                exact.into(),
                Cell::Int(config.seed),
            ]);
        }
    }
    Ok((t, notices))
}
