use approx::assert_abs_diff_eq;
use ndarray::{Array2, Array3, Array4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reversedq_core::envs::{chain::RIGHT, ChainConfig, ChainEnv, Environment};
use reversedq_core::mdp::{
    backward_induction, evaluate_policy, evaluate_uniform_policy, regret, DeterministicPolicy,
    MdpError, MdpModel, Trajectory, TrajectoryError,
};
use reversedq_testsupport::{
    enumerate_policies, enumerated_optimum, monte_carlo_policy_return, random_small_model,
    recursive_policy_value,
};

/// Single-state model with the given per-action rewards at every step.
fn bandit_model(horizon: usize, action_rewards: &[f64]) -> MdpModel<f64> {
    let a = action_rewards.len();
    let transition = Array4::from_elem((horizon, 1, a, 1), 1.0);
    let reward = Array3::from_shape_fn((horizon, 1, a), |(_, _, i)| action_rewards[i]);
    MdpModel::new(transition, reward, 0).unwrap()
}

fn chain_model(states: usize, horizon: usize, p: f64) -> MdpModel<f64> {
    ChainEnv::new(ChainConfig::new(states, horizon, p))
        .unwrap()
        .to_model()
}

#[test]
fn single_step_max_picks_better_action() {
    let model = bandit_model(1, &[0.3, 0.7]);
    let solution = backward_induction(&model).unwrap();
    assert_abs_diff_eq!(solution.values[[0, 0]], 0.7);
    assert_eq!(solution.greedy.action(0, 0), 1);
}

#[test]
fn terminal_values_are_zero() {
    let model = chain_model(4, 6, 0.9);
    let solution = backward_induction(&model).unwrap();
    for s in 0..model.num_states() {
        assert_eq!(solution.values[[model.horizon(), s]], 0.0);
    }
}

#[test]
fn optimum_matches_exhaustive_enumeration_on_small_chain() {
    let model = chain_model(2, 2, 0.9);
    let solution = backward_induction(&model).unwrap();
    let brute_force = enumerated_optimum(&model);
    assert_abs_diff_eq!(
        solution.values[[0, model.initial_state()]],
        brute_force,
        epsilon = 1e-12
    );
}

#[test]
fn values_are_maxima_of_action_values() {
    let model = chain_model(5, 7, 0.8);
    let solution = backward_induction(&model).unwrap();
    for h in 0..model.horizon() {
        for s in 0..model.num_states() {
            let best = (0..model.num_actions())
                .map(|a| solution.action_values[[h, s, a]])
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(solution.values[[h, s]], best);
        }
    }
}

#[test]
fn greedy_policy_attains_the_optimum_exactly() {
    let model = chain_model(4, 5, 0.9);
    let solution = backward_induction(&model).unwrap();
    let value = evaluate_policy(&model, &solution.greedy).unwrap();
    assert_eq!(value, solution.values[[0, model.initial_state()]]);
}

#[test]
fn zero_rewards_evaluate_to_zero() {
    let transition = Array4::from_elem((3, 2, 2, 2), 0.5);
    let reward = Array3::zeros((3, 2, 2));
    let model = MdpModel::new(transition, reward, 0).unwrap();
    for policy in enumerate_policies(&model) {
        assert_eq!(evaluate_policy(&model, &policy).unwrap(), 0.0);
    }
}

#[test]
fn policy_value_matches_monte_carlo_on_chain() {
    let env = ChainEnv::new(ChainConfig::new(3, 3, 0.9)).unwrap();
    let model = env.to_model();
    let always_right = DeterministicPolicy::constant(3, 3, RIGHT);
    let exact = evaluate_policy(&model, &always_right).unwrap();
    let (mc_mean, std_err) = monte_carlo_policy_return(&env, &always_right, 1_000_000, 11);
    assert!(
        (mc_mean - exact).abs() <= 3.0 * std_err,
        "exact {exact} vs Monte-Carlo {mc_mean} (3 SE = {})",
        3.0 * std_err
    );
}

#[test]
fn uniform_policy_equals_the_only_policy_when_single_action() {
    let model = bandit_model(4, &[0.6]);
    let only = DeterministicPolicy::constant(4, 1, 0);
    assert_eq!(
        evaluate_uniform_policy(&model),
        evaluate_policy(&model, &only).unwrap()
    );
}

#[test]
fn uniform_policy_on_constant_rewards_sums_them() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let base = random_small_model(&mut rng, 3, 2, 3);
        let c = 0.37;
        let reward = Array3::from_elem((base.horizon(), base.num_states(), base.num_actions()), c);
        let transition = Array4::from_shape_fn(
            (base.horizon(), base.num_states(), base.num_actions(), base.num_states()),
            |(h, s, a, s2)| base.transition(h, s, a, s2),
        );
        let model = MdpModel::new(transition, reward, base.initial_state()).unwrap();
        assert_abs_diff_eq!(
            evaluate_uniform_policy(&model),
            c * model.horizon() as f64,
            epsilon = 1e-12
        );
    }
}

#[test]
fn regret_of_the_optimal_policy_is_zero() {
    let model = chain_model(3, 4, 0.9);
    let greedy = backward_induction(&model).unwrap().greedy;
    let policies = vec![greedy; 7];
    assert_eq!(regret(&model, &policies).unwrap(), 0.0);
}

#[test]
fn regret_is_linear_in_identical_policies() {
    let model = chain_model(3, 4, 0.9);
    let left = DeterministicPolicy::constant(4, 3, 0);
    let one = regret(&model, std::slice::from_ref(&left)).unwrap();
    let ten = regret(&model, &vec![left; 10]).unwrap();
    assert_abs_diff_eq!(ten, 10.0 * one, epsilon = 1e-12);
}

#[test]
fn regret_matches_enumeration_oracle_on_small_chain() {
    let model = chain_model(2, 2, 0.9);
    let always_left = DeterministicPolicy::constant(2, 2, 0);
    let oracle_best = enumerated_optimum(&model);
    let oracle_left = recursive_policy_value(&model, &always_left);
    let expected = 10.0 * (oracle_best - oracle_left);
    let actual = regret(&model, &vec![always_left; 10]).unwrap();
    assert_abs_diff_eq!(actual, expected, epsilon = 1e-12);
}

#[test]
fn optimum_dominates_every_deterministic_policy() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..25 {
        let model = random_small_model(&mut rng, 3, 2, 3);
        let best = backward_induction(&model).unwrap().values[[0, model.initial_state()]];
        for policy in enumerate_policies(&model) {
            let value = evaluate_policy(&model, &policy).unwrap();
            assert!(
                best >= value - 1e-12,
                "optimal {best} undercuts a deterministic policy at {value}"
            );
        }
    }
}

#[test]
fn regret_is_nonnegative_for_arbitrary_policy_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let model = random_small_model(&mut rng, 3, 2, 3);
        let policies: Vec<_> = (0..6)
            .map(|_| {
                DeterministicPolicy::new(Array2::from_shape_fn(
                    (model.horizon(), model.num_states()),
                    |_| rng.random_range(0..model.num_actions()),
                ))
            })
            .collect();
        assert!(regret(&model, &policies).unwrap() >= 0.0);
    }
}

#[test]
fn doubling_rewards_doubles_the_optimum_and_keeps_the_greedy_policy() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..20 {
        let base = random_small_model(&mut rng, 3, 2, 3);
        let halved = Array3::from_shape_fn(
            (base.horizon(), base.num_states(), base.num_actions()),
            |(h, s, a)| base.reward(h, s, a) / 2.0,
        );
        let doubled = halved.mapv(|r| r * 2.0);
        let transition = Array4::from_shape_fn(
            (base.horizon(), base.num_states(), base.num_actions(), base.num_states()),
            |(h, s, a, s2)| base.transition(h, s, a, s2),
        );
        let small = MdpModel::new(transition.clone(), halved, base.initial_state()).unwrap();
        let big = MdpModel::new(transition, doubled, base.initial_state()).unwrap();
        let small_solution = backward_induction(&small).unwrap();
        let big_solution = backward_induction(&big).unwrap();
        assert_abs_diff_eq!(
            2.0 * small_solution.values[[0, small.initial_state()]],
            big_solution.values[[0, big.initial_state()]],
            epsilon = 1e-12
        );
        assert_eq!(small_solution.greedy, big_solution.greedy);
    }
}

#[test]
fn construction_rejects_non_stochastic_rows() {
    let mut transition = Array4::from_elem((1, 1, 1, 1), 1.0);
    transition[[0, 0, 0, 0]] = 1.0 + 1e-6;
    let reward = Array3::zeros((1, 1, 1));
    assert!(matches!(
        MdpModel::new(transition, reward, 0),
        Err(MdpError::NotStochastic { .. })
    ));
}

#[test]
fn construction_normalizes_float_noise() {
    let mut transition = Array4::zeros((1, 2, 1, 2));
    transition[[0, 0, 0, 0]] = 0.5 + 1e-10;
    transition[[0, 0, 0, 1]] = 0.5;
    transition[[0, 1, 0, 1]] = 1.0;
    let reward = Array3::zeros((1, 2, 1));
    let model = MdpModel::new(transition, reward, 0).unwrap();
    let sum: f64 = (0..2).map(|s2| model.transition(0, 0, 0, s2)).sum();
    assert!((sum - 1.0).abs() <= 1e-12);
}

#[test]
fn construction_rejects_negative_probabilities_and_bad_rewards() {
    let mut transition = Array4::zeros((1, 1, 2, 1));
    transition[[0, 0, 0, 0]] = 1.0;
    transition[[0, 0, 1, 0]] = 1.0;
    let mut reward = Array3::zeros((1, 1, 2));
    reward[[0, 0, 1]] = 1.2;
    assert!(matches!(
        MdpModel::new(transition.clone(), reward, 0),
        Err(MdpError::RewardOutOfRange { .. })
    ));

    transition[[0, 0, 0, 0]] = -1.0;
    assert!(matches!(
        MdpModel::new(transition, Array3::zeros((1, 1, 2)), 0),
        Err(MdpError::BadProbability { .. })
    ));

    assert!(matches!(
        MdpModel::new(Array4::from_elem((1, 1, 1, 1), 1.0), Array3::zeros((1, 1, 1)), 3),
        Err(MdpError::InitialStateOutOfRange(3))
    ));
}

#[test]
fn policy_validation_rejects_bad_shapes_and_actions() {
    let model = chain_model(3, 4, 0.9);
    let wrong_shape = DeterministicPolicy::constant(2, 3, 0);
    assert!(matches!(
        evaluate_policy(&model, &wrong_shape),
        Err(MdpError::PolicyShapeMismatch { .. })
    ));
    let bad_action = DeterministicPolicy::constant(4, 3, 9);
    assert!(matches!(
        evaluate_policy(&model, &bad_action),
        Err(MdpError::PolicyActionOutOfRange { .. })
    ));
}

#[test]
fn trajectory_validation() {
    assert!(matches!(
        Trajectory::<f64>::new(vec![(0, 0)], vec![]),
        Err(TrajectoryError::Empty)
    ));
    assert!(matches!(
        Trajectory::new(vec![(0, 0), (0, 0)], vec![0.5, 0.5]),
        Err(TrajectoryError::PathLengthMismatch { .. })
    ));
    assert!(matches!(
        Trajectory::new(vec![(0, 0), (0, 0)], vec![1.5]),
        Err(TrajectoryError::RewardOutOfRange { .. })
    ));
    let ok = Trajectory::new(vec![(0, 1), (2, 0)], vec![0.25]).unwrap();
    assert_eq!(ok.horizon(), 1);
    assert_eq!(ok.total_reward(), 0.25);
}

#[test]
fn f32_instantiation_tracks_f64_solution() {
    let model64 = chain_model(4, 6, 0.9);
    let config32 = ChainConfig::<f32>::new(4, 6, 0.9);
    let model32 = ChainEnv::new(config32).unwrap().to_model();
    let v64 = backward_induction(&model64).unwrap().values[[0, 0]];
    let v32 = backward_induction(&model32).unwrap().values[[0, 0]];
    assert!((v64 - f64::from(v32)).abs() < 1e-4);
}
