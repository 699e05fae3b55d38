use rand::Rng;
use thiserror::Error;

use crate::agent::config::{
    AgentConfig, AgentConfigError, ExploitMix, ExploreReadAction, GreedySource, PassDirection,
    PolicyExploreTerm, ResetSchedule, UpdateTiming,
};
use crate::agent::state::LearnerState;
use crate::envs::EnvError;
use crate::mdp::{argmax_first, MdpError, Trajectory};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum AgentError {
    #[error("beta shape parameters must be positive and finite, got alpha={alpha}, beta={beta}")]
    InvalidBetaShape { alpha: f64, beta: f64 },
    #[error("trajectory covers {got} steps but the learner expects {expected}")]
    TrajectoryHorizonMismatch { got: usize, expected: usize },
    #[error("a learning run needs at least one episode")]
    NoEpisodes,
    #[error("environment and model disagree: {0}")]
    ModelEnvMismatch(String),
    #[error(transparent)]
    Config(#[from] AgentConfigError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Mdp(#[from] MdpError),
}

/// One draw from `Beta(alpha, beta)`. Supports shapes below 1 (the explore
/// weight starts at `beta = n₀/κ`, e.g. 0.05 on the chain) and is
/// deterministic given the stream state.
pub fn beta_sample<F: Scalar, R: Rng + ?Sized>(
    alpha: F,
    beta: F,
    rng: &mut R,
) -> Result<F, AgentError> {
    if !(alpha > F::zero() && alpha.is_finite() && beta > F::zero() && beta.is_finite()) {
        return Err(AgentError::InvalidBetaShape {
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            beta: beta.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(F::beta_draw(alpha, beta, rng))
}

/// Beta shape pairs `((α̃, β), (ᾰ, β))` of the exploit and explore mixing
/// weights at the given visit count: `α̃ = (H+1)/κ`, `ᾰ = 1/κ`,
/// `β = (N + n₀)/κ`.
pub fn mix_weight_shapes<F: Scalar>(visits: u32, config: &AgentConfig<F>) -> ((F, F), (F, F)) {
    let beta = (F::from_u32(visits).expect("representable count") + config.prior_transitions)
        / config.inflation;
    let exploit_alpha = F::from_count(config.horizon + 1) / config.inflation;
    let explore_alpha = F::one() / config.inflation;
    ((exploit_alpha, beta), (explore_alpha, beta))
}

/// Draws one `(w̃, w̆)` exploit/explore weight pair.
pub fn sample_mix_weights<F: Scalar, R: Rng + ?Sized>(
    visits: u32,
    config: &AgentConfig<F>,
    rng: &mut R,
) -> Result<(F, F), AgentError> {
    let ((exploit_alpha, beta), (explore_alpha, _)) = mix_weight_shapes(visits, config);
    let exploit = beta_sample(exploit_alpha, beta, rng)?;
    let explore = beta_sample(explore_alpha, beta, rng)?;
    Ok((exploit, explore))
}

/// Draws a fresh weight pair for ensemble member `member` and mixes both of
/// its entries at `(step, s, a)` toward `r + V_{step+1}(next_state)` of the
/// matching value table.
#[allow(clippy::too_many_arguments)]
pub fn ensemble_update<F: Scalar, R: Rng + ?Sized>(
    state: &mut LearnerState<F>,
    config: &AgentConfig<F>,
    member: usize,
    step: usize,
    s: usize,
    a: usize,
    reward: F,
    next_state: usize,
    rng: &mut R,
) -> Result<(), AgentError> {
    let (w_exploit, w_explore) = sample_mix_weights(state.visits[[step, s, a]], config, rng)?;

    let target = reward + state.exploit_value[[step + 1, next_state]];
    let entry = &mut state.exploit_ensemble[[member, step, s, a]];
    *entry = (F::one() - w_exploit) * *entry + w_exploit * target;

    let target = reward + state.explore_value[[step + 1, next_state]];
    let entry = &mut state.explore_ensemble[[member, step, s, a]];
    *entry = (F::one() - w_explore) * *entry + w_explore * target;

    Ok(())
}

fn ensemble_max<F: Scalar>(values: impl IntoIterator<Item = F>) -> F {
    values
        .into_iter()
        .fold(F::neg_infinity(), |acc, v| acc.max(v))
}

/// Value-table and policy-table refresh after the ensembles have absorbed a
/// transition at `(step, s, a)`:
///
/// - the exploit value is rewritten from the best exploit-ensemble member at
///   the greedy action, clipped at `V⁰_step`;
/// - the explore aggregate, the explore value, and the policy-table blend are
///   applied (immediately, or at stage boundaries under staged timing), and
///   under a staged reset schedule a boundary also re-initializes the
///   explore-ensemble entry;
/// - the policy table takes the minimum of its old entry and the weighted
///   exploit/explore blend, so it never increases;
/// - the visit counter advances.
pub fn value_and_policy_update<F: Scalar>(
    state: &mut LearnerState<F>,
    config: &AgentConfig<F>,
    step: usize,
    s: usize,
    a: usize,
) {
    let members = config.ensemble_size;
    let exploit_best_at =
        |state: &LearnerState<F>, action: usize| {
            ensemble_max((0..members).map(|j| state.exploit_ensemble[[j, step, s, action]]))
        };

    let greedy_a = match config.greedy_source {
        GreedySource::ExploitEnsemble => {
            argmax_first((0..state.num_actions()).map(|action| exploit_best_at(state, action)))
        }
        GreedySource::PolicyTable => state.select_action(step, s),
    };
    let best_member = argmax_first((0..members).map(|j| state.explore_ensemble[[j, step, s, a]]));

    state.exploit_value[[step, s]] = state.init_value[step].min(exploit_best_at(state, greedy_a));

    let staging_active = config.explore_update_timing == UpdateTiming::Staged
        || config.explore_reset == ResetSchedule::Staged;
    let stage_crossed =
        staging_active && state.visits[[step, s, a]] + 1 >= state.stage_next[[step, s, a]];

    let apply_now = match config.explore_update_timing {
        UpdateTiming::PerStep => true,
        UpdateTiming::Staged => stage_crossed,
    };
    if apply_now {
        let read_a = match config.explore_read_action {
            ExploreReadAction::Greedy => greedy_a,
            ExploreReadAction::Taken => a,
        };
        state.explore_q[[step, s, a]] = state.explore_ensemble[[best_member, step, s, read_a]];
        state.explore_value[[step, s]] = ensemble_max(
            state
                .explore_q
                .slice(ndarray::s![step, s, ..])
                .iter()
                .copied(),
        );

        let exploit_coeff = match config.exploit_mix {
            ExploitMix::Eta => config.mixing_rate,
            ExploitMix::OneMinusEta => F::one() - config.mixing_rate,
        };
        let explore_term = match config.policy_explore_term {
            PolicyExploreTerm::StateValue => state.explore_value[[step, s]],
            PolicyExploreTerm::TakenEntry => state.explore_q[[step, s, a]],
        };
        let blend = exploit_coeff * exploit_best_at(state, a) + config.mixing_rate * explore_term;
        let entry = &mut state.policy_q[[step, s, a]];
        *entry = (*entry).min(blend);
    }
    if stage_crossed {
        if config.explore_reset == ResetSchedule::Staged {
            for j in 0..members {
                state.explore_ensemble[[j, step, s, a]] = state.init_value[step + 1];
            }
        }
        let grown = (F::from_u32(state.stage_next[[step, s, a]]).expect("representable count")
            * config.stage_growth)
            .ceil();
        state.stage_next[[step, s, a]] = grown.to_u32().unwrap_or(u32::MAX);
    }

    state.visits[[step, s, a]] += 1;
}

/// Full processing of one observed transition: every ensemble member absorbs
/// it, then the value and policy tables refresh.
pub fn process_transition<F: Scalar, R: Rng + ?Sized>(
    state: &mut LearnerState<F>,
    config: &AgentConfig<F>,
    step: usize,
    s: usize,
    a: usize,
    reward: F,
    next_state: usize,
    rng: &mut R,
) -> Result<(), AgentError> {
    for member in 0..config.ensemble_size {
        ensemble_update(state, config, member, step, s, a, reward, next_state, rng)?;
    }
    value_and_policy_update(state, config, step, s, a);
    Ok(())
}

/// Applies one episode's transitions to the learner, back-to-front or
/// front-to-back depending on the configured pass direction.
///
/// Weight draws sit on their own stream, so processing a forward pass here at
/// episode end consumes randomness identically to processing each transition
/// the moment it is observed; the two are bit-equal.
pub fn process_episode<F: Scalar, R: Rng + ?Sized>(
    state: &mut LearnerState<F>,
    config: &AgentConfig<F>,
    trajectory: &Trajectory<F>,
    rng: &mut R,
) -> Result<(), AgentError> {
    let horizon = state.horizon();
    if trajectory.horizon() != horizon {
        return Err(AgentError::TrajectoryHorizonMismatch {
            got: trajectory.horizon(),
            expected: horizon,
        });
    }
    let mut apply = |state: &mut LearnerState<F>, i: usize| {
        let (s, a) = trajectory.step(i);
        let (next_state, _) = trajectory.step(i + 1);
        process_transition(state, config, i, s, a, trajectory.reward(i), next_state, rng)
    };
    match config.pass_direction {
        PassDirection::Backward => {
            for i in (0..horizon).rev() {
                apply(state, i)?;
            }
        }
        PassDirection::Forward => {
            for i in 0..horizon {
                apply(state, i)?;
            }
        }
    }
    Ok(())
}
