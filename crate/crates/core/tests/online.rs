//! Properties of the online solvers and reference systems.

use mwadv_core::exact_eval::{exhaustive_offline_optimum, value_false, value_policy, value_true};
use mwadv_core::model::ModelParams;
use mwadv_core::online_dp::{
    branch_values, no_information_baseline, optimal_value, simulate_online, solve_k_expert, solve_two_expert,
    KExpertParams,
};
use mwadv_core::policies::ratio_policy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const E: f64 = std::f64::consts::E;

#[test]
fn bellman_consistency_across_parameters() {
    for (eps, mu, rho0) in [(1.0 / E, 0.5, 0.5), (0.2, 0.3, 0.8), (0.7, 0.9, 0.1)] {
        let p = ModelParams::new(eps, mu, 40, rho0).unwrap();
        let t = solve_two_expert(&p).unwrap();
        for k in 0..40 {
            for j in -(k as i64)..=k as i64 {
                let (lie, truth) = branch_values(&t, k, j, &p).unwrap();
                assert!((t.value(k, j).unwrap() - lie.max(truth)).abs() <= 1e-12);
                assert!(t.value(k, j).unwrap() >= 0.0);
            }
        }
    }
}

#[test]
fn dominance_chain() {
    for n in [4usize, 8, 12, 14] {
        for (mu, rho0) in [(0.3, 0.5), (0.5, 0.5), (0.7, 0.3), (0.5, 0.2)] {
            let p = ModelParams::new(1.0 / E, mu, n, rho0).unwrap();
            let online = optimal_value(&p).unwrap();
            let (_, offline) = exhaustive_offline_optimum(&p).unwrap();
            let ratio = value_policy(&ratio_policy(&p).policy, &p).unwrap();
            let lie = value_false(n, rho0, &p).unwrap();
            let coin = no_information_baseline(&p).unwrap();
            let truth = value_true(n, rho0, &p).unwrap();
            assert!(online >= offline - 1e-12);
            assert!(offline >= ratio.max(lie) - 1e-12);
            // the coin flip mixes offline policies, so the offline optimum bounds it
            assert!(offline >= coin - 1e-12);
            assert!(coin >= truth - 1e-12);
        }
    }
}

/// Lying throughout is not always better than flipping a coin: with an
/// accurate honest expert and a light adversary, occasional truths pay.
#[test]
fn coin_flip_can_beat_lying_throughout() {
    let p = ModelParams::new(1.0 / E, 0.7, 14, 0.3).unwrap();
    let lie = value_false(14, 0.3, &p).unwrap();
    let coin = no_information_baseline(&p).unwrap();
    assert!(coin > lie + 0.01, "{coin} vs {lie}");
}

#[test]
fn bounds_sandwich_at_five_hundred() {
    for mu in [0.3, 0.5, 0.7] {
        let p = ModelParams::new(1.0 / E, mu, 500, 0.5).unwrap();
        let per_stage = optimal_value(&p).unwrap() / 500.0;
        assert!(per_stage > 1.0 - mu);
        assert!(per_stage <= 1.0 - mu * mu + 0.05);
    }
}

#[test]
fn value_nondecreasing_in_offset() {
    for (eps, mu, rho0) in [(1.0 / E, 0.5, 0.5), (0.1, 0.2, 0.6), (0.8, 0.75, 0.3)] {
        let p = ModelParams::new(eps, mu, 60, rho0).unwrap();
        let t = solve_two_expert(&p).unwrap();
        for k in 0..60 {
            // larger j means less adversary weight
            let row = t.stage_values(k);
            assert!(row.windows(2).all(|w| w[0] >= w[1] - 1e-12), "stage {k}");
        }
    }
}

#[test]
fn work_grows_quadratically() {
    let counts: Vec<u64> = [100usize, 200, 400]
        .iter()
        .map(|&n| solve_two_expert(&ModelParams::standard(n).unwrap()).unwrap().states_evaluated())
        .collect();
    assert_eq!(counts, vec![100 * 100, 200 * 200, 400 * 400]);
    assert_eq!(counts[1], 4 * counts[0]);
    assert_eq!(counts[2], 4 * counts[1]);
}

#[test]
fn simulation_within_clt_band() {
    let p = ModelParams::standard(20).unwrap();
    let t = solve_two_expert(&p).unwrap();
    let r = simulate_online(&p, &t, 100_000, 12345).unwrap();
    assert!((r.mean - t.root_value()).abs() <= 4.0 * r.stderr);
    assert_eq!(r, simulate_online(&p, &t, 100_000, 12345).unwrap());
}

#[test]
fn multi_expert_reduces_to_two_experts() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let eps = rng.gen_range(0.1..0.9);
        let mu = rng.gen_range(0.05..0.95);
        let share = rng.gen_range(0.05..0.95);
        let n = rng.gen_range(1..=25);
        let k = KExpertParams::with_adversary_share(eps, n, vec![mu], share).unwrap();
        let two = ModelParams::new(eps, mu, n, share).unwrap();
        let (a, b) = (solve_k_expert(&k).unwrap(), optimal_value(&two).unwrap());
        assert!((a - b).abs() < 1e-9, "eps={eps} mu={mu} share={share} n={n}: {a} vs {b}");
    }
}

#[test]
fn multi_expert_state_symmetry_is_exact() {
    // Splitting an honest expert's class must not change the value.
    let same = KExpertParams::new(0.4, 8, vec![0.6, 0.6, 0.6], vec![1.0, 2.0, 2.0, 2.0]).unwrap();
    let nudged = KExpertParams::new(0.4, 8, vec![0.6, 0.6, 0.6 + 1e-15], vec![1.0, 2.0, 2.0, 2.0]).unwrap();
    let (a, b) = (solve_k_expert(&same).unwrap(), solve_k_expert(&nudged).unwrap());
    assert!((a - b).abs() < 1e-12);
}
