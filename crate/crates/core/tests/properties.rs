mod common;

use ccsim::association::{
    assoc_random, assoc_stat_greedy, assoc_sum_squares_greedy, assoc_uniform, assoc_vector_scheduling,
    dispersion_objective,
};
use ccsim::bounds::{arbitrary_activity_bounds, data_driven_lower_bound, uniform_activity_bounds};
use ccsim::combinatorics::{all_group_stats, binom_cdf, cdf_surrogates, max_load_expectation_bounds};
use ccsim::model::{
    avg_delay_data, delivery_time, exact_avg_delay, load_vector, profile, ActivityMatrix, ActivityProfile,
    Association, LoadVector, SystemConfig,
};
use ccsim::synthetic::{sample_activity_matrix, RngSeed};
use proptest::prelude::*;

fn config_strategy(max_states: usize) -> impl Strategy<Value = (usize, usize)> {
    (1..=max_states).prop_flat_map(|lambda| (Just(lambda), 0..=lambda))
}

fn delay_of(loads: &[u32], config: &SystemConfig) -> f64 {
    delivery_time(&profile(&LoadVector(loads.to_vec())), config).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn delay_ignores_load_order(
        (lambda, t) in config_strategy(8),
        seed in any::<u64>(),
    ) {
        let config = SystemConfig::with_replication(lambda, lambda, t).unwrap();
        let mut r = common::rng(seed);
        let mut loads: Vec<u32> = (0..lambda).map(|_| rand::Rng::gen_range(&mut r, 0..20)).collect();
        let base = delay_of(&loads, &config);
        rand::seq::SliceRandom::shuffle(loads.as_mut_slice(), &mut r);
        prop_assert_eq!(delay_of(&loads, &config), base);
    }

    #[test]
    fn delay_matches_exact_rational(
        (lambda, t) in config_strategy(12),
        loads in prop::collection::vec(0u32..50, 12),
    ) {
        let loads = &loads[..lambda];
        let config = SystemConfig::with_replication(lambda, lambda, t).unwrap();
        let exact = common::delay_f64(loads, t);
        prop_assert!((delay_of(loads, &config) - exact).abs() <= 1e-12 * exact.max(1.0));
    }

    #[test]
    fn delay_monotone_in_each_load(
        (lambda, t) in config_strategy(8),
        loads in prop::collection::vec(0u32..20, 8),
        which in 0usize..8,
    ) {
        let mut loads = loads[..lambda].to_vec();
        let config = SystemConfig::with_replication(lambda, lambda, t).unwrap();
        let before = delay_of(&loads, &config);
        loads[which % lambda] += 1;
        prop_assert!(delay_of(&loads, &config) >= before - 1e-12);
    }

    #[test]
    fn uniform_profile_identity((lambda, t) in config_strategy(30), c in 0u32..100) {
        let config = SystemConfig::with_replication(lambda, lambda, t).unwrap();
        let expected = c as f64 * (lambda - t) as f64 / (1 + t) as f64;
        let got = delay_of(&vec![c; lambda], &config);
        prop_assert!((got - expected).abs() <= 1e-10 * expected.max(1.0));
    }

    #[test]
    fn loads_conserve_active_users(
        lambda in 1usize..6,
        states in prop::collection::vec(0usize..6, 1..30),
        mask in any::<u64>(),
    ) {
        let states: Vec<usize> = states.iter().map(|s| s % lambda).collect();
        let k = states.len();
        let config = SystemConfig::with_replication(k, lambda, lambda.min(1)).unwrap();
        let assoc = Association::new(states, lambda).unwrap();
        let active: Vec<usize> = (0..k).filter(|u| mask >> u & 1 == 1).collect();
        let v = load_vector(&assoc, &active, &config).unwrap();
        prop_assert_eq!(v.0.iter().sum::<u32>() as usize, active.len());
    }

    #[test]
    fn binomial_cdf_monotone(n in 0u64..200, q in 0.0f64..=1.0) {
        let mut prev = 0.0;
        for x in -1..=(n as i64) {
            let f = binom_cdf(n, q, x).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!(f >= prev - 1e-12);
            prev = f;
        }
        prop_assert_eq!(binom_cdf(n, q, n as i64).unwrap(), 1.0);
    }

    #[test]
    fn group_means_sum_to_aggregate(seed in any::<u64>(), k in 1usize..40, lambda in 1usize..8) {
        let mut r = common::rng(seed);
        let probs = common::random_probs(&mut r, k);
        let states = common::random_states(&mut r, k, lambda);
        let p = ActivityProfile::new(probs.clone()).unwrap();
        let assoc = Association::new(states, lambda).unwrap();
        let total: f64 = all_group_stats(&assoc, &p).iter().map(|g| g.mean).sum();
        prop_assert!((total - probs.iter().sum::<f64>()).abs() < 1e-9);
    }

    #[test]
    fn arbitrary_bracket_contains_exact(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let lambda = rand::Rng::gen_range(&mut r, 2..=4);
        let k = rand::Rng::gen_range(&mut r, 1..=10);
        let t = rand::Rng::gen_range(&mut r, 1..=lambda);
        let probs = common::random_probs(&mut r, k);
        let states = common::random_states(&mut r, k, lambda);
        let config = SystemConfig::with_replication(k, lambda, t).unwrap();
        let p = ActivityProfile::new(probs.clone()).unwrap();
        let assoc = Association::new(states.clone(), lambda).unwrap();
        let b = arbitrary_activity_bounds(&assoc, &p, &config).unwrap();
        let exact = common::expected_delay_bruteforce(&states, &probs, lambda, t);
        prop_assert!(b.lower <= b.upper);
        prop_assert!(b.contains(exact, 1e-9), "{} not in [{}, {}]", exact, b.lower, b.upper);
        let m = max_load_expectation_bounds(&assoc, &p).unwrap();
        prop_assert!(m.lower() <= m.upper() + 1e-12);
    }

    #[test]
    fn uniform_bracket_contains_exact(
        lambda in 2usize..=4,
        per_state in 1usize..=3,
        p in 0.0f64..=1.0,
        t_pick in 1usize..4,
    ) {
        let t = 1 + (t_pick - 1) % lambda;
        let k = lambda * per_state;
        let config = SystemConfig::with_replication(k, lambda, t).unwrap();
        let assoc = assoc_uniform(k, lambda).unwrap();
        let b = uniform_activity_bounds(&config, per_state, p).unwrap();
        let exact = common::expected_delay_bruteforce(assoc.states(), &vec![p; k], lambda, t);
        prop_assert!(b.contains(exact, 1e-9), "{} not in [{}, {}]", exact, b.lower, b.upper);
        if t < lambda && b.lower > 0.0 {
            prop_assert!(b.upper / b.lower <= (lambda - 1) as f64 / t as f64 + 1e-9);
        }
    }

    #[test]
    fn data_driven_bound_below_every_policy(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let lambda = rand::Rng::gen_range(&mut r, 2..=6);
        let k = rand::Rng::gen_range(&mut r, 1..=30);
        let t = rand::Rng::gen_range(&mut r, 1..=lambda);
        let slots = rand::Rng::gen_range(&mut r, 4..=40);
        let probs = common::random_probs(&mut r, k);
        let p = ActivityProfile::new(probs).unwrap();
        let d = sample_activity_matrix(&p, slots, RngSeed(seed)).unwrap();
        let config = SystemConfig::with_replication(k, lambda, t).unwrap();
        let lb = data_driven_lower_bound(&d, &config).unwrap();
        let assocs = [
            assoc_random(k, lambda, RngSeed(seed ^ 1)).unwrap(),
            assoc_uniform(k, lambda).unwrap(),
            assoc_stat_greedy(&p, lambda).unwrap().assoc,
            assoc_vector_scheduling(&d, lambda, Default::default()).unwrap().assoc,
            assoc_sum_squares_greedy(&d, lambda).unwrap().assoc,
        ];
        for a in &assocs {
            prop_assert!(lb <= avg_delay_data(a, &d, &config).unwrap() + 1e-9);
        }
    }

    #[test]
    fn policies_cover_every_user(seed in any::<u64>(), k in 1usize..40, lambda in 1usize..8, slots in 4usize..30) {
        let mut r = common::rng(seed);
        let p = ActivityProfile::new(common::random_probs(&mut r, k)).unwrap();
        let d = sample_activity_matrix(&p, slots, RngSeed(seed)).unwrap();
        let reports = [
            assoc_stat_greedy(&p, lambda).unwrap(),
            assoc_vector_scheduling(&d, lambda, Default::default()).unwrap(),
            assoc_sum_squares_greedy(&d, lambda).unwrap(),
        ];
        for rep in &reports {
            prop_assert_eq!(rep.assoc.num_users(), k);
            prop_assert!(rep.assoc.states().iter().all(|&s| s < lambda));
            let mut users: Vec<usize> = rep.placements.iter().map(|&(u, _)| u).collect();
            users.sort_unstable();
            prop_assert_eq!(users, (0..k).collect::<Vec<_>>());
        }
        prop_assert_eq!(assoc_random(k, lambda, RngSeed(seed)).unwrap(), assoc_random(k, lambda, RngSeed(seed)).unwrap());
        prop_assert_eq!(assoc_sum_squares_greedy(&d, lambda).unwrap(), assoc_sum_squares_greedy(&d, lambda).unwrap());
    }

    #[test]
    fn stat_greedy_steps_are_argmins(seed in any::<u64>(), k in 1usize..12, lambda in 1usize..5) {
        let mut r = common::rng(seed);
        let p = ActivityProfile::new(common::random_probs(&mut r, k)).unwrap();
        let rep = assoc_stat_greedy(&p, lambda).unwrap();
        let mut partial = vec![None; k];
        for (step, &(user, state)) in rep.placements.iter().enumerate() {
            for s in 0..lambda {
                for u in (0..k).filter(|&u| partial[u].is_none()) {
                    let mut trial = partial.clone();
                    trial[u] = Some(s);
                    prop_assert!(rep.objective_trace[step] <= dispersion_objective(&p, &trial, lambda) + 1e-12);
                }
            }
            partial[user] = Some(state);
        }
    }

    #[test]
    fn vector_scheduling_respects_cap(seed in any::<u64>(), alpha in prop::option::of(0.1f64..3.0)) {
        let mut r = common::rng(seed);
        let k = rand::Rng::gen_range(&mut r, 1..=40);
        let lambda = rand::Rng::gen_range(&mut r, 1..=8);
        let slots = rand::Rng::gen_range(&mut r, 4..=30);
        let p = ActivityProfile::new(common::random_probs(&mut r, k)).unwrap();
        let d = sample_activity_matrix(&p, slots, RngSeed(seed)).unwrap();
        let opts = ccsim::VectorSchedulingOptions { alpha, ..Default::default() };
        let rep = assoc_vector_scheduling(&d, lambda, opts).unwrap();
        let cap = 3.0 * rep.alpha.unwrap() + 1.0;
        prop_assert!(phase_one_peak(&d, &rep) < cap);
    }
}

/// Largest scaled (slot, state) load over first-phase users, recomputed from scratch.
pub fn phase_one_peak(d: &ActivityMatrix, rep: &ccsim::AlgoReport) -> f64 {
    let lambda = rep.assoc.num_states();
    let mut peak: f64 = 0.0;
    for row in d.rows() {
        let demand: usize = row.iter().map(|&x| x as usize).sum();
        if demand == 0 {
            continue;
        }
        let share = (lambda as f64 / demand as f64).min(1.0);
        let mut loads = vec![0.0; lambda];
        for (u, &x) in row.iter().enumerate() {
            if x == 1 && !rep.residual_users.contains(&u) {
                loads[rep.assoc.state_of(u)] += share;
            }
        }
        peak = loads.iter().copied().fold(peak, f64::max);
    }
    peak
}

#[test]
fn sampled_matrix_marginals_concentrate() {
    let probs = vec![0.05, 0.3, 0.5, 0.9, 1.0, 0.0];
    let p = ActivityProfile::new(probs.clone()).unwrap();
    let d = sample_activity_matrix(&p, 10_000, RngSeed(3)).unwrap();
    for (m, q) in d.column_means().iter().zip(&probs) {
        let se = (q * (1.0 - q) / 10_000.0).sqrt();
        assert!((m - q).abs() <= 4.0 * se + 1e-12, "{m} vs {q}");
    }
    let expected: f64 = probs.iter().sum();
    let mean_row = (0..d.num_slots()).map(|s| d.slot_demand(s) as f64).sum::<f64>() / 10_000.0;
    assert!((mean_row - expected).abs() < 0.05);
}

#[test]
fn surrogates_bracket_empirical_cdf() {
    let probs = [0.9, 0.7, 0.4, 0.4, 0.25, 0.1, 0.05];
    let p = ActivityProfile::new(probs.to_vec()).unwrap();
    let assoc = Association::new(vec![0; probs.len()], 1).unwrap();
    let stats = all_group_stats(&assoc, &p)[0];
    let (f1, f2) = cdf_surrogates(&stats, probs.len() + 1);
    let n = 200_000;
    let mut r = common::rng(11);
    let mut counts = vec![0usize; probs.len() + 1];
    for _ in 0..n {
        let v = probs.iter().filter(|&&q| rand::Rng::gen::<f64>(&mut r) < q).count();
        counts[v] += 1;
    }
    let mut cum = 0usize;
    for x in 0..=probs.len() {
        cum += counts[x];
        let emp = cum as f64 / n as f64;
        let tol = 4.0 * (emp * (1.0 - emp) / n as f64).sqrt() + 1e-9;
        assert!(f1[x] <= emp + tol, "F1 x={x}: {} > {emp}", f1[x]);
        assert!(emp <= f2[x] + tol, "F2 x={x}: {emp} > {}", f2[x]);
    }
}

#[test]
fn max_load_bracket_contains_sampled_mean() {
    let mut r = common::rng(5);
    for _ in 0..20 {
        let k = rand::Rng::gen_range(&mut r, 2..=16);
        let lambda = rand::Rng::gen_range(&mut r, 2..=4);
        let probs = common::random_probs(&mut r, k);
        let states = common::random_states(&mut r, k, lambda);
        let p = ActivityProfile::new(probs.clone()).unwrap();
        let assoc = Association::new(states.clone(), lambda).unwrap();
        let m = max_load_expectation_bounds(&assoc, &p).unwrap();
        let n = 100_000;
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..n {
            let mut loads = vec![0u32; lambda];
            for u in 0..k {
                if rand::Rng::gen::<f64>(&mut r) < probs[u] {
                    loads[states[u]] += 1;
                }
            }
            let l1 = *loads.iter().max().unwrap() as f64;
            sum += l1;
            sq += l1 * l1;
        }
        let mean = sum / n as f64;
        let se = ((sq / n as f64 - mean * mean).max(0.0) / n as f64).sqrt();
        assert!(m.lower() <= mean + 4.0 * se + 1e-9, "{} > {mean}", m.lower());
        assert!(mean <= m.upper() + 4.0 * se + 1e-9, "{mean} > {}", m.upper());
    }
}

#[test]
fn sampled_average_converges_to_exact() {
    let mut r = common::rng(21);
    for _ in 0..10 {
        let k = rand::Rng::gen_range(&mut r, 1..=8);
        let lambda = rand::Rng::gen_range(&mut r, 1..=4);
        let t = rand::Rng::gen_range(&mut r, 0..=lambda);
        let probs = common::random_probs(&mut r, k);
        let states = common::random_states(&mut r, k, lambda);
        let config = SystemConfig::with_replication(k, lambda, t).unwrap();
        let p = ActivityProfile::new(probs).unwrap();
        let assoc = Association::new(states, lambda).unwrap();
        let exact = exact_avg_delay(&assoc, &p, &config).unwrap();
        let slots = 20_000;
        let d = sample_activity_matrix(&p, slots, RngSeed(rand::Rng::gen(&mut r))).unwrap();
        let weights = config.delivery_weights();
        let per_slot: Vec<f64> = d
            .rows()
            .map(|row| {
                let mut loads = vec![0u32; lambda];
                for (u, &x) in row.iter().enumerate() {
                    loads[assoc.state_of(u)] += x as u32;
                }
                weights.delay_of_loads(&mut loads)
            })
            .collect();
        let mean = per_slot.iter().sum::<f64>() / slots as f64;
        let var = per_slot.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (slots - 1) as f64;
        let se = (var / slots as f64).sqrt();
        assert!((mean - avg_delay_data(&assoc, &d, &config).unwrap()).abs() < 1e-9);
        assert!((mean - exact).abs() <= 4.0 * se + 1e-12, "{mean} vs {exact}");
    }
}

#[test]
fn sampled_delay_tracks_scaling_envelopes() {
    use ccsim::bounds::{sbn_estimate, scaling_envelope, ScalingRegime};
    // dense: I p = 8 users active per state on average; sparse: I p = 0.5
    for (per_state, p, dense) in [(16usize, 0.5f64, true), (2, 0.25, false)] {
        for lambda in [8usize, 16, 32, 64] {
            let k = per_state * lambda;
            let config = SystemConfig::with_replication(k, lambda, lambda / 4).unwrap();
            let assoc = assoc_uniform(k, lambda).unwrap();
            let profile = ActivityProfile::uniform(k, p).unwrap();
            let est = sbn_estimate(&assoc, &profile, &config, 4000, RngSeed(lambda as u64)).unwrap();
            let regime = if dense { ScalingRegime::Dense { p } } else { ScalingRegime::Sparse { p } };
            let ratio = est.mean / scaling_envelope(&config, regime).unwrap();
            assert!((0.1..=10.0).contains(&ratio), "Lambda={lambda} dense={dense} ratio={ratio}");
        }
    }
}
