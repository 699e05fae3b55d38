use approx::assert_abs_diff_eq;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reversedq_core::envs::bdcl::{LOCK1, LOCK2, SINK, START};
use reversedq_core::envs::chain::{LEFT, RIGHT};
use reversedq_core::envs::{BdclConfig, BdclEnv, ChainConfig, ChainEnv, EnvError, Environment};
use reversedq_core::mdp::evaluate_uniform_policy;
use reversedq_testsupport::{empirical_transition_row, monte_carlo_uniform_return};

fn bdcl(p_fail: f64, seed: u64) -> BdclEnv<f64> {
    BdclEnv::new(BdclConfig::new(5, 5, p_fail, seed)).unwrap()
}

#[test]
fn low_actions_route_to_lock1_high_actions_to_lock2() {
    let env = bdcl(0.0, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for a in 0..=2 {
        let (next, reward) = env.step(0, START, a, &mut rng).unwrap();
        assert_eq!((next, reward), (LOCK1, 0.0));
    }
    for a in 3..=4 {
        let (next, reward) = env.step(0, START, a, &mut rng).unwrap();
        assert_eq!((next, reward), (LOCK2, 0.0));
    }
}

#[test]
fn sink_absorbs_and_pays_its_per_step_reward() {
    let env = bdcl(0.02, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for a in 0..5 {
        let (next, reward) = env.step(2, SINK, a, &mut rng).unwrap();
        assert_eq!(next, SINK);
        assert_abs_diff_eq!(reward, 0.025);
    }
}

#[test]
fn lock_occupancy_at_the_last_step_pays_the_terminal_reward() {
    let env = bdcl(0.02, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for a in 0..5 {
        let (_, reward) = env.step(4, LOCK2, a, &mut rng).unwrap();
        assert_eq!(reward, 1.0);
        let (_, reward) = env.step(4, LOCK1, a, &mut rng).unwrap();
        assert_eq!(reward, 0.25);
    }
    // Without failure the occupant stays put at the terminal step.
    let env = bdcl(0.0, 7);
    let (next, _) = env.step(4, LOCK2, 3, &mut rng).unwrap();
    assert_eq!(next, LOCK2);
}

#[test]
fn wrong_action_on_a_lock_falls_into_the_sink() {
    let env = bdcl(0.0, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for h in 1..4 {
        let progress = env.progress_action(1, h);
        let (next, _) = env.step(h, LOCK2, progress, &mut rng).unwrap();
        assert_eq!(next, LOCK2);
        let wrong = (progress + 1) % 5;
        let (next, _) = env.step(h, LOCK2, wrong, &mut rng).unwrap();
        assert_eq!(next, SINK);
    }
}

#[test]
fn playing_the_progress_actions_without_failure_earns_the_full_lock_reward() {
    let env = bdcl(0.0, 42);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut s = env.initial_state();
    let mut total = 0.0;
    for h in 0..5 {
        let a = match s {
            START => 4,
            LOCK2 if h < 4 => env.progress_action(1, h),
            LOCK2 => 0,
            other => panic!("unexpected state {other}"),
        };
        let (next, reward) = env.step(h, s, a, &mut rng).unwrap();
        total += reward;
        s = next;
    }
    assert_eq!(total, 1.0);
    assert_eq!(s, LOCK2);
}

#[test]
fn bdcl_rejects_invalid_step_inputs() {
    let env = bdcl(0.02, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    assert!(matches!(
        env.step(5, START, 0, &mut rng),
        Err(EnvError::StepOutOfRange { .. })
    ));
    assert!(matches!(
        env.step(0, 4, 0, &mut rng),
        Err(EnvError::StateOutOfRange { .. })
    ));
    assert!(matches!(
        env.step(0, START, 5, &mut rng),
        Err(EnvError::ActionOutOfRange { .. })
    ));
}

#[test]
fn bdcl_config_invariants_are_enforced() {
    assert!(BdclEnv::new(BdclConfig::<f64>::new(1, 5, 0.0, 0)).is_err());
    assert!(BdclEnv::new(BdclConfig::<f64>::new(5, 1, 0.0, 0)).is_err());
    assert!(BdclEnv::new(BdclConfig::<f64>::new(5, 5, 1.0, 0)).is_err());
    let mut config = BdclConfig::<f64>::new(5, 5, 0.02, 0);
    config.lock1_reward = 0.1; // below the sink ceiling of 1/8
    assert!(BdclEnv::new(config).is_err());
}

#[test]
fn same_structure_seed_reproduces_the_progress_actions() {
    let a = bdcl(0.02, 123);
    let b = bdcl(0.02, 123);
    for lock in 0..2 {
        for h in 0..4 {
            assert_eq!(a.progress_action(lock, h), b.progress_action(lock, h));
        }
    }
    assert_eq!(a, b);
}

#[test]
fn bdcl_model_mixes_the_failure_override_into_every_row() {
    let env = bdcl(0.02, 7);
    let model = env.to_model();
    model.validate().unwrap();
    let progress = env.progress_action(1, 1);
    assert_abs_diff_eq!(model.transition(1, LOCK2, progress, LOCK2), 0.98, epsilon = 1e-15);
    assert_abs_diff_eq!(model.transition(1, LOCK2, progress, SINK), 0.02, epsilon = 1e-15);
    // A failure-bound row stays a single spike.
    let wrong = (progress + 1) % 5;
    assert_abs_diff_eq!(model.transition(1, LOCK2, wrong, SINK), 1.0);
}

#[test]
fn failure_free_bdcl_kernel_is_one_hot() {
    let model = bdcl(0.0, 7).to_model();
    for h in 0..5 {
        for s in 0..4 {
            for a in 0..5 {
                for next in 0..4 {
                    let p = model.transition(h, s, a, next);
                    assert!(p == 0.0 || p == 1.0);
                }
            }
        }
    }
}

#[test]
fn chain_moves_in_the_intended_direction_on_success() {
    let env = ChainEnv::new(ChainConfig::new(8, 10, 1.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (next, reward) = env.step(0, 4, RIGHT, &mut rng).unwrap();
    assert_eq!((next, reward), (5, 0.0));
    let (next, _) = env.step(0, 4, LEFT, &mut rng).unwrap();
    assert_eq!(next, 3);
}

#[test]
fn chain_boundaries_pay_their_rewards_and_clamp_movement() {
    let env = ChainEnv::new(ChainConfig::new(8, 10, 1.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (next, reward) = env.step(0, 0, LEFT, &mut rng).unwrap();
    assert_eq!((next, reward), (0, 0.05));
    let (next, reward) = env.step(0, 7, RIGHT, &mut rng).unwrap();
    assert_eq!((next, reward), (7, 1.0));
}

#[test]
fn two_state_chain_reaches_the_paying_boundary_in_one_move() {
    let env = ChainEnv::new(ChainConfig::new(2, 4, 1.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (next, reward) = env.step(0, 0, RIGHT, &mut rng).unwrap();
    assert_eq!((next, reward), (1, 0.05));
    let (_, reward) = env.step(1, 1, LEFT, &mut rng).unwrap();
    assert_eq!(reward, 1.0);
}

#[test]
fn chain_model_splits_probability_between_directions() {
    let env = ChainEnv::new(ChainConfig::new(20, 50, 0.9)).unwrap();
    let model = env.to_model();
    model.validate().unwrap();
    assert_abs_diff_eq!(model.transition(10, 5, RIGHT, 6), 0.9, epsilon = 1e-15);
    assert_abs_diff_eq!(model.transition(10, 5, RIGHT, 4), 0.1, epsilon = 1e-15);
    // Boundary rows fold the off-edge move back onto the boundary.
    assert_abs_diff_eq!(model.transition(0, 0, LEFT, 0), 0.9, epsilon = 1e-15);
    assert_abs_diff_eq!(model.transition(0, 0, LEFT, 1), 0.1, epsilon = 1e-15);
}

#[test]
fn chain_config_invariants_are_enforced() {
    assert!(ChainEnv::new(ChainConfig::<f64>::new(1, 10, 0.9)).is_err());
    assert!(ChainEnv::new(ChainConfig::<f64>::new(5, 10, 0.5)).is_err());
    assert!(ChainEnv::new(ChainConfig::<f64>::new(5, 10, 1.1)).is_err());
    assert!(ChainEnv::new(ChainConfig::<f64>::new(5, 0, 0.9)).is_err());
}

#[test]
fn observed_rewards_stay_in_the_documented_sets() {
    let env = bdcl(0.02, 9);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut s = env.initial_state();
    for episode in 0..200 {
        s = env.initial_state();
        for h in 0..5 {
            let a = (episode + h) % 5;
            let (next, reward) = env.step(h, s, a, &mut rng).unwrap();
            assert!([0.0, 0.025, 0.25, 1.0].contains(&reward), "reward {reward}");
            s = next;
        }
    }
    let _ = s;

    let env = ChainEnv::new(ChainConfig::new(6, 8, 0.9)).unwrap();
    let mut s = env.initial_state();
    for episode in 0..200usize {
        s = env.initial_state();
        for h in 0..8 {
            let a = (episode + h) % 2;
            let (next, reward) = env.step(h, s, a, &mut rng).unwrap();
            assert!([0.0, 0.05, 1.0].contains(&reward), "reward {reward}");
            s = next;
        }
    }
    let _ = s;
}

/// Frequency-vs-kernel smoke check on a few cells; the acceptance suite
/// sweeps every `(h, s, a)` of both benchmark environments at 10⁵ samples.
#[test]
fn sampled_frequencies_track_the_exported_kernel() {
    let env = bdcl(0.02, 31);
    let model = env.to_model();
    let samples = 20_000;
    for (h, s, a) in [(0, START, 0), (1, LOCK1, env.progress_action(0, 1)), (3, SINK, 2)] {
        let freq = empirical_transition_row(&env, h, s, a, samples, 1000 + h as u64);
        for next in 0..4 {
            let p = model.transition(h, s, a, next);
            let se = (p * (1.0 - p) / samples as f64).sqrt();
            assert!(
                (freq[next] - p).abs() <= 5.0 * se.max(f64::EPSILON),
                "cell ({h},{s},{a})->{next}: freq {} vs p {p}",
                freq[next]
            );
        }
    }
}

#[test]
fn uniform_rollouts_match_the_exact_uniform_value_on_bdcl() {
    let env = bdcl(0.02, 5);
    let exact = evaluate_uniform_policy(&env.to_model());
    let (mc_mean, std_err) = monte_carlo_uniform_return(&env, 1_000_000, 12);
    assert!(
        (mc_mean - exact).abs() <= 3.0 * std_err,
        "exact {exact} vs Monte-Carlo {mc_mean} (3 SE = {})",
        3.0 * std_err
    );
}
