//! Independent oracles used by the test suites. Everything here deliberately
//! avoids the dynamic-programming code paths it is used to check: policy
//! values come from a naive recursion over future steps, optima from
//! exhaustive enumeration, and distributional answers from Monte-Carlo
//! rollouts.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reversedq_core::envs::Environment;
use reversedq_core::mdp::{DeterministicPolicy, MdpModel};

/// Expected return of `policy` from `(h, s)` by direct recursion over the
/// remaining steps. Exponential in the horizon; fine for the tiny models the
/// oracles run on.
pub fn recursive_policy_value(model: &MdpModel<f64>, policy: &DeterministicPolicy) -> f64 {
    fn go(model: &MdpModel<f64>, policy: &DeterministicPolicy, h: usize, s: usize) -> f64 {
        if h == model.horizon() {
            return 0.0;
        }
        let a = policy.action(h, s);
        let mut value = model.reward(h, s, a);
        for next in 0..model.num_states() {
            let p = model.transition(h, s, a, next);
            if p > 0.0 {
                value += p * go(model, policy, h + 1, next);
            }
        }
        value
    }
    go(model, policy, 0, model.initial_state())
}

/// All `A^(H·S)` deterministic policies of a model. Callers keep `H·S` small.
pub fn enumerate_policies(model: &MdpModel<f64>) -> Vec<DeterministicPolicy> {
    let (horizon, num_states, num_actions) =
        (model.horizon(), model.num_states(), model.num_actions());
    let cells = horizon * num_states;
    let total = num_actions.checked_pow(cells as u32).expect("policy space too large");
    let mut policies = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut actions = Array2::zeros((horizon, num_states));
        for h in 0..horizon {
            for s in 0..num_states {
                actions[[h, s]] = code % num_actions;
                code /= num_actions;
            }
        }
        policies.push(DeterministicPolicy::new(actions));
    }
    policies
}

/// Best value over every deterministic policy, by brute force.
pub fn enumerated_optimum(model: &MdpModel<f64>) -> f64 {
    enumerate_policies(model)
        .iter()
        .map(|policy| recursive_policy_value(model, policy))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Random small model with dimensions up to the given caps: uniform rewards
/// in `[0, 1]`, transition rows drawn uniformly and normalized.
pub fn random_small_model(
    rng: &mut impl Rng,
    max_states: usize,
    max_actions: usize,
    max_horizon: usize,
) -> MdpModel<f64> {
    let num_states = rng.random_range(1..=max_states);
    let num_actions = rng.random_range(1..=max_actions);
    let horizon = rng.random_range(1..=max_horizon);
    let mut transition = ndarray::Array4::zeros((horizon, num_states, num_actions, num_states));
    let mut reward = ndarray::Array3::zeros((horizon, num_states, num_actions));
    for h in 0..horizon {
        for s in 0..num_states {
            for a in 0..num_actions {
                let weights: Vec<f64> = (0..num_states)
                    .map(|_| rng.random::<f64>() + 1e-3)
                    .collect();
                let total: f64 = weights.iter().sum();
                for (next, w) in weights.iter().enumerate() {
                    transition[[h, s, a, next]] = w / total;
                }
                reward[[h, s, a]] = rng.random::<f64>();
            }
        }
    }
    let initial = rng.random_range(0..num_states);
    MdpModel::new(transition, reward, initial).expect("sampled rows are stochastic")
}

/// Mean and standard error of the per-episode return of a fixed policy under
/// Monte-Carlo simulation.
pub fn monte_carlo_policy_return<E: Environment<f64>>(
    env: &E,
    policy: &DeterministicPolicy,
    episodes: usize,
    seed: u64,
) -> (f64, f64) {
    monte_carlo_return(env, episodes, seed, |h, s, _| policy.action(h, s))
}

/// Mean and standard error of the uniform-random policy's per-episode return.
pub fn monte_carlo_uniform_return<E: Environment<f64>>(
    env: &E,
    episodes: usize,
    seed: u64,
) -> (f64, f64) {
    let num_actions = env.num_actions();
    monte_carlo_return(env, episodes, seed, |_, _, rng: &mut ChaCha8Rng| {
        rng.random_range(0..num_actions)
    })
}

fn monte_carlo_return<E: Environment<f64>>(
    env: &E,
    episodes: usize,
    seed: u64,
    mut choose: impl FnMut(usize, usize, &mut ChaCha8Rng) -> usize,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..episodes {
        let mut s = env.initial_state();
        let mut total = 0.0;
        for h in 0..env.horizon() {
            let a = choose(h, s, &mut rng);
            let (next, reward) = env.step(h, s, a, &mut rng).expect("valid step");
            total += reward;
            s = next;
        }
        sum += total;
        sum_sq += total * total;
    }
    let n = episodes as f64;
    let mean = sum / n;
    let variance = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    (mean, (variance / n).sqrt())
}

/// Empirical next-state frequencies of `env.step` at one `(h, s, a)`.
pub fn empirical_transition_row<E: Environment<f64>>(
    env: &E,
    h: usize,
    s: usize,
    a: usize,
    samples: usize,
    seed: u64,
) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; env.num_states()];
    for _ in 0..samples {
        let (next, _) = env.step(h, s, a, &mut rng).expect("valid step");
        counts[next] += 1;
    }
    counts
        .into_iter()
        .map(|c| c as f64 / samples as f64)
        .collect()
}
