use crate::agent::config::AgentConfig;
use crate::agent::state::LearnerState;
use crate::agent::updates::{process_episode, AgentError};
use crate::envs::Environment;
use crate::mdp::{evaluate_policy, MdpModel, Trajectory, SENTINEL_ACTION};
use crate::rng::RngStreams;
use crate::scalar::Scalar;

/// Per-episode record of one learning run.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningRun<F> {
    pub seed: u64,
    /// Realized return of each episode.
    pub returns: Vec<F>,
    /// Exact expected return of the greedy-policy snapshot taken at the start
    /// of each episode; the regret of episode `k` is `V*_1(s_1)` minus this.
    pub greedy_values: Vec<F>,
}

/// Runs `episodes` episodes of selection, interaction, and episode
/// processing. Fully deterministic given the seed, the environment's
/// structure, and the configuration.
///
/// `model` must be the exact law of `env`; it prices the per-episode greedy
/// snapshots.
pub fn run_learning<F: Scalar, E: Environment<F>>(
    env: &E,
    model: &MdpModel<F>,
    config: &AgentConfig<F>,
    episodes: usize,
    seed: u64,
) -> Result<(LearningRun<F>, LearnerState<F>), AgentError> {
    if episodes == 0 {
        return Err(AgentError::NoEpisodes);
    }
    if config.horizon != env.horizon() {
        return Err(AgentError::ModelEnvMismatch(format!(
            "config horizon {} vs environment horizon {}",
            config.horizon,
            env.horizon()
        )));
    }
    if model.horizon() != env.horizon()
        || model.num_states() != env.num_states()
        || model.num_actions() != env.num_actions()
    {
        return Err(AgentError::ModelEnvMismatch(format!(
            "model is [H={}, S={}, A={}], environment is [H={}, S={}, A={}]",
            model.horizon(),
            model.num_states(),
            model.num_actions(),
            env.horizon(),
            env.num_states(),
            env.num_actions()
        )));
    }

    let horizon = env.horizon();
    let mut streams = RngStreams::from_root(seed);
    let mut state = LearnerState::init(config, env.num_states(), env.num_actions())?;
    let mut returns = Vec::with_capacity(episodes);
    let mut greedy_values = Vec::with_capacity(episodes);

    for episode in 0..episodes {
        greedy_values.push(evaluate_policy(model, &state.greedy_policy())?);

        let mut s = env.initial_state();
        let mut path = Vec::with_capacity(horizon + 1);
        let mut rewards = Vec::with_capacity(horizon);
        for h in 0..horizon {
            let a = state.select_action(h, s);
            let (next, reward) = env.step(h, s, a, &mut streams.env)?;
            path.push((s, a));
            rewards.push(reward);
            s = next;
        }
        path.push((s, SENTINEL_ACTION));
        let trajectory =
            Trajectory::new(path, rewards).expect("episode loop records a complete trajectory");

        returns.push(trajectory.total_reward());
        process_episode(&mut state, config, &trajectory, &mut streams.weights)?;

        debug_assert_eq!(state.check_invariants(episode + 1), Ok(()));
    }

    Ok((
        LearningRun {
            seed,
            returns,
            greedy_values,
        },
        state,
    ))
}
