use ndarray::{Array2, Array3};

use crate::mdp::{DeterministicPolicy, MdpError, MdpModel, ValueSolution};
use crate::scalar::Scalar;

/// Smallest index attaining the maximum. Assumes at least one element and no
/// NaNs, which holds for every table in this crate.
pub(crate) fn argmax_first<F: PartialOrd + Copy>(values: impl IntoIterator<Item = F>) -> usize {
    let mut iter = values.into_iter();
    let mut best = iter.next().expect("argmax of empty sequence");
    let mut best_idx = 0;
    for (idx, v) in iter.enumerate() {
        if v > best {
            best = v;
            best_idx = idx + 1;
        }
    }
    best_idx
}

/// Exact dynamic-programming solve for the optimal values `V*`, `Q*` and the
/// greedy policy, via the finite-horizon Bellman recursion
/// `Q_h(s,a) = r_h(s,a) + Σ_{s'} P_h(s'|s,a) V_{h+1}(s')` with `V_{H} ≡ 0`
/// (0-based steps) and `V_h(s) = max_a Q_h(s,a)`.
pub fn backward_induction<F: Scalar>(model: &MdpModel<F>) -> Result<ValueSolution<F>, MdpError> {
    model.validate()?;
    let (horizon, num_states, num_actions) =
        (model.horizon(), model.num_states(), model.num_actions());
    let mut values = Array2::<F>::zeros((horizon + 1, num_states));
    let mut action_values = Array3::<F>::zeros((horizon, num_states, num_actions));
    let mut greedy = Array2::<usize>::zeros((horizon, num_states));

    for h in (0..horizon).rev() {
        for s in 0..num_states {
            for a in 0..num_actions {
                let mut expected_next = F::zero();
                for s2 in 0..num_states {
                    expected_next += model.transition(h, s, a, s2) * values[[h + 1, s2]];
                }
                action_values[[h, s, a]] = model.reward(h, s, a) + expected_next;
            }
            let row = action_values.slice(ndarray::s![h, s, ..]);
            let best = argmax_first(row.iter().copied());
            greedy[[h, s]] = best;
            values[[h, s]] = action_values[[h, s, best]];
        }
    }

    Ok(ValueSolution {
        values,
        action_values,
        greedy: DeterministicPolicy::new(greedy),
    })
}

/// Exact expected return `V_1^π(s_1)` of a deterministic policy, by backward
/// recursion under `π`. Independent of any RNG.
pub fn evaluate_policy<F: Scalar>(
    model: &MdpModel<F>,
    policy: &DeterministicPolicy,
) -> Result<F, MdpError> {
    model.check_policy(policy)?;
    let (horizon, num_states) = (model.horizon(), model.num_states());
    let mut next_values = vec![F::zero(); num_states];
    let mut values = vec![F::zero(); num_states];

    for h in (0..horizon).rev() {
        for s in 0..num_states {
            let a = policy.action(h, s);
            let mut expected_next = F::zero();
            for s2 in 0..num_states {
                expected_next += model.transition(h, s, a, s2) * next_values[s2];
            }
            values[s] = model.reward(h, s, a) + expected_next;
        }
        std::mem::swap(&mut values, &mut next_values);
    }

    Ok(next_values[model.initial_state()])
}

/// Exact expected return of the uniform-random policy (every action with
/// probability `1/A`), the Random reference of the scaled-reward metric.
pub fn evaluate_uniform_policy<F: Scalar>(model: &MdpModel<F>) -> F {
    let (horizon, num_states, num_actions) =
        (model.horizon(), model.num_states(), model.num_actions());
    let inv_actions = F::one() / F::from_count(num_actions);
    let mut next_values = vec![F::zero(); num_states];
    let mut values = vec![F::zero(); num_states];

    for h in (0..horizon).rev() {
        for s in 0..num_states {
            let mut mean_q = F::zero();
            for a in 0..num_actions {
                let mut expected_next = F::zero();
                for s2 in 0..num_states {
                    expected_next += model.transition(h, s, a, s2) * next_values[s2];
                }
                mean_q += model.reward(h, s, a) + expected_next;
            }
            values[s] = mean_q * inv_actions;
        }
        std::mem::swap(&mut values, &mut next_values);
    }

    next_values[model.initial_state()]
}

/// Cumulative regret `Σ_k (V*_1(s_1) − V_1^{π_k}(s_1))` of a per-episode
/// policy sequence. Each gap is clamped at zero to keep rounding from turning
/// an exact tie negative.
pub fn regret<F: Scalar>(
    model: &MdpModel<F>,
    episode_policies: &[DeterministicPolicy],
) -> Result<F, MdpError> {
    let optimal = backward_induction(model)?;
    let best = optimal.values[[0, model.initial_state()]];
    let mut total = F::zero();
    for policy in episode_policies {
        let value = evaluate_policy(model, policy)?;
        total += (best - value).max(F::zero());
    }
    Ok(total)
}
