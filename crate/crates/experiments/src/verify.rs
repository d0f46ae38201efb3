//! Self-checks over every module: oracle equivalence, Bellman consistency,
//! the residual and normal-approximation numerics, the dominance chain and the per-stage bounds.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mwadv_core::exact_eval::{
    berry_esseen_check, berry_esseen_scale_bound, brute_force_value, exhaustive_offline_optimum,
    logistic_step_residuals, value_false, value_policy, value_true,
};
use mwadv_core::model::ModelParams;
use mwadv_core::online_dp::{
    branch_values, conditional_losses, no_information_baseline, optimal_value, solve_k_expert, solve_two_expert,
    KExpertParams,
};
use mwadv_core::policies::{random_policy, ratio_policy, OfflinePolicy};

use crate::output::{Cell, Table};

pub const SOFT_BUDGET: Duration = Duration::from_secs(300);

/// Evaluator under test in the oracle-equivalence check.
pub type Evaluator<'a> = &'a (dyn Fn(&OfflinePolicy, &ModelParams) -> mwadv_core::Result<f64> + Sync);

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Worst deviation found; the check passes when it is within `tolerance`.
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn over_budget(&self) -> bool {
        self.elapsed > SOFT_BUDGET
    }

    pub fn table(&self) -> Table {
        // timings stay out of the file so reruns are byte-identical
        let mut t = Table::new(vec!["check", "passed", "measured", "tolerance", "detail"]);
        for c in &self.checks {
            t.push(vec![
                c.name.into(),
                Cell::from(if c.passed { "true" } else { "false" }),
                c.measured.into(),
                c.tolerance.into(),
                c.detail.clone().into(),
            ]);
        }
        t
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:<24} measured={:<11.3e} tolerance={:<10.3e} {:>7.2}s  {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                c.tolerance,
                c.seconds,
                c.detail
            ));
        }
        out
    }
}

fn timed(name: &'static str, tolerance: f64, f: impl FnOnce() -> mwadv_core::Result<(f64, String)>) -> Check {
    let start = Instant::now();
    let (measured, detail, ok) = match f() {
        Ok((m, d)) => (m, d, m <= tolerance),
        Err(e) => (f64::INFINITY, format!("error: {e}"), false),
    };
    Check {
        name,
        measured,
        tolerance,
        passed: ok,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

const E: f64 = std::f64::consts::E;

pub fn oracle_equivalence(evaluator: Evaluator<'_>, seed: u64) -> Check {
    timed("oracle-equivalence", 1e-9, || {
        let mut worst = 0.0f64;
        let mut count = 0;
        for (mu, rho0) in [(0.3, 0.5), (0.5, 0.5), (0.7, 0.3)] {
            let p = ModelParams::new(1.0 / E, mu, 8, rho0)?;
            for mask in 0..1u64 << 8 {
                let policy = OfflinePolicy::from_mask(mask, 8);
                worst = worst.max((evaluator(&policy, &p)? - brute_force_value(&policy, &p)?).abs());
                count += 1;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..200 {
            let n = rng.gen_range(1..=14);
            let mu = [0.3, 0.5, 0.7][i % 3];
            let p = ModelParams::new(rng.gen_range(0.2..0.8), mu, n, rng.gen_range(0.1..0.9))?;
            let policy = random_policy(n, rng.gen_range(0.1..0.9), rng.gen())?;
            worst = worst.max((evaluator(&policy, &p)? - brute_force_value(&policy, &p)?).abs());
            count += 1;
        }
        Ok((worst, format!("{count} policies against path enumeration")))
    })
}

pub fn bellman() -> Check {
    timed("bellman-consistency", 1e-12, || {
        let mut worst = 0.0f64;
        for (eps, mu, rho0) in [(1.0 / E, 0.5, 0.5), (0.2, 0.3, 0.8), (0.7, 0.85, 0.1)] {
            let p = ModelParams::new(eps, mu, 100, rho0)?;
            let t = solve_two_expert(&p)?;
            for k in 0..100 {
                for j in -(k as i64)..=k as i64 {
                    let (lie, truth) = branch_values(&t, k, j, &p)?;
                    let v = t.value(k, j).expect("state in table");
                    worst = worst.max((v - lie.max(truth)).abs());
                }
            }
        }
        Ok((worst, "every state of three N=100 tables".into()))
    })
}

pub fn residual_sweep() -> Check {
    timed("residual-sweep", 1e-15, || {
        let mut worst = 0.0f64;
        for a in [0.1, 1.0, 10.0] {
            for i in 0..=200 {
                let r = logistic_step_residuals(i as f64 * 0.25, a)?;
                let violation = [r.eps_r, r.eps_bound - r.eps_r, -r.delta_r, r.delta_r - r.delta_bound]
                    .into_iter()
                    .fold(0.0, f64::max);
                worst = worst.max(violation);
            }
        }
        Ok((worst, "r in [0, 50] step 0.25, a in {0.1, 1, 10}".into()))
    })
}

pub fn berry_esseen_decay() -> Check {
    let mu = 0.3;
    let bound = berry_esseen_scale_bound(mu);
    timed("berry-esseen-decay", bound, || {
        let mut worst = 0.0f64;
        let mut errors = Vec::new();
        for n in [10, 40, 160] {
            let b = berry_esseen_check(n, n, mu)?;
            worst = worst.max(b.error * b.sigma);
            errors.push(b.error);
        }
        let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
        let measured = if decreasing { worst } else { f64::INFINITY };
        let shown = errors.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(" ");
        Ok((measured, format!("max error*sigma over n=m in {{10,40,160}}; errors {shown}")))
    })
}

pub fn equalization() -> Check {
    timed("coin-flip-equalization", 1e-12, || {
        let mut worst = 0.0f64;
        for i in 1..20 {
            for k in 1..20 {
                let (a, b) = conditional_losses(i as f64 / 20.0, k as f64 / 20.0, 0.5);
                worst = worst.max((a - b).abs());
            }
        }
        Ok((worst, "q = 1/2 on a 19x19 (mu, rho) grid".into()))
    })
}

pub fn dominance_chain() -> Check {
    timed("dominance-chain", 1e-12, || {
        let mut worst = 0.0f64;
        for n in [6, 10, 14] {
            for (mu, rho0) in [(0.3, 0.5), (0.5, 0.5), (0.7, 0.3), (0.5, 0.2)] {
                let p = ModelParams::new(1.0 / E, mu, n, rho0)?;
                let online = optimal_value(&p)?;
                let (_, offline) = exhaustive_offline_optimum(&p)?;
                let ratio = value_policy(&ratio_policy(&p).policy, &p)?;
                let lie = value_false(n, rho0, &p)?;
                let coin = no_information_baseline(&p)?;
                let truth = value_true(n, rho0, &p)?;
                for (hi, lo) in [(online, offline), (offline, ratio), (offline, lie), (offline, coin), (coin, truth)] {
                    worst = worst.max(lo - hi);
                }
            }
        }
        Ok((worst, "online >= offline >= ratio, false, coin flip >= true".into()))
    })
}

pub fn bounds_sandwich() -> Check {
    timed("bounds-sandwich", 0.0, || {
        let mut slack = f64::INFINITY;
        let mut parts = Vec::new();
        for mu in [0.3, 0.5, 0.7] {
            let p = ModelParams::new(1.0 / E, mu, 500, 0.5)?;
            let per_stage = optimal_value(&p)? / 500.0;
            slack = slack.min(per_stage - (1.0 - mu)).min((1.0 - mu * mu) + 0.05 - per_stage);
            parts.push(format!("mu={mu}: {per_stage:.4}"));
        }
        // negative: every bound holds with that much room
        Ok((-slack, format!("V/N at N=500: {}", parts.join(", "))))
    })
}

pub fn reduction() -> Check {
    timed("multi-expert-reduction", 1e-9, || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let (eps, mu, share) = (rng.gen_range(0.1..0.9), rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95));
            let n = rng.gen_range(1..=20);
            let k = KExpertParams::with_adversary_share(eps, n, vec![mu], share)?;
            let two = ModelParams::new(eps, mu, n, share)?;
            worst = worst.max((solve_k_expert(&k)? - optimal_value(&two)?).abs());
        }
        Ok((worst, "K=2 exact DP against the two-expert DP, 20 draws".into()))
    })
}

pub fn run_verify_with(evaluator: Evaluator<'_>, seed: u64) -> VerifyReport {
    let start = Instant::now();
    let checks = vec![
        oracle_equivalence(evaluator, seed),
        bellman(),
        residual_sweep(),
        berry_esseen_decay(),
        equalization(),
        dominance_chain(),
        bounds_sandwich(),
        reduction(),
    ];
    VerifyReport {
        checks,
        elapsed: start.elapsed(),
    }
}

pub fn run_verify(seed: u64) -> VerifyReport {
    run_verify_with(&value_policy, seed)
}
