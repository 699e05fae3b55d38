use ndarray::{Array3, Array4};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::envs::{EnvError, Environment};
use crate::mdp::MdpModel;
use crate::scalar::Scalar;

pub const LEFT: usize = 0;
pub const RIGHT: usize = 1;
const NUM_ACTIONS: usize = 2;

/// Parameters of the chain MDP: `S` states in a line, two actions, sparse
/// rewards at the boundary states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig<F> {
    pub num_states: usize,
    pub horizon: usize,
    /// Probability the chosen direction is the one actually moved in.
    pub success_probability: F,
    /// Reward for occupying the leftmost (starting) state.
    pub start_reward: F,
    /// Reward for occupying the rightmost state.
    pub end_reward: F,
}

impl<F: Scalar> ChainConfig<F> {
    pub fn new(num_states: usize, horizon: usize, success_probability: F) -> Self {
        Self {
            num_states,
            horizon,
            success_probability,
            start_reward: F::cast(0.05),
            end_reward: F::one(),
        }
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let err = |msg: String| Err(EnvError::InvalidConfig(msg));
        if self.num_states < 2 {
            return err(format!("chain needs at least 2 states, got {}", self.num_states));
        }
        if self.horizon == 0 {
            return err("chain needs a positive horizon".into());
        }
        if !(self.success_probability > F::cast(0.5) && self.success_probability <= F::one()) {
            return err("success probability must lie in (0.5, 1]".into());
        }
        for (name, r) in [("start", self.start_reward), ("end", self.end_reward)] {
            if !(r >= F::zero() && r <= F::one()) {
                return err(format!("{name} reward must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

impl<F: Scalar> Default for ChainConfig<F> {
    /// The benchmark setting: 20 states, horizon 50, 90% success.
    fn default() -> Self {
        Self::new(20, 50, F::cast(0.9))
    }
}

/// The chain MDP. Movement follows the chosen direction with probability `p`
/// and the opposite direction otherwise; moving off a boundary keeps the
/// current position. Rewards depend only on the occupied state: a small
/// payoff at the start, a large one at the far end, zero in between.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainEnv<F> {
    config: ChainConfig<F>,
}

impl<F: Scalar> ChainEnv<F> {
    pub fn new(config: ChainConfig<F>) -> Result<Self, EnvError> {
        config.validate()?;
        Ok(Self { config })
    }

    pub fn config(&self) -> &ChainConfig<F> {
        &self.config
    }

    fn reward_at(&self, s: usize) -> F {
        if s == 0 {
            self.config.start_reward
        } else if s == self.config.num_states - 1 {
            self.config.end_reward
        } else {
            F::zero()
        }
    }

    /// Position after moving one step in `direction` (+1 right, -1 left),
    /// staying put at the boundaries.
    fn moved(&self, s: usize, direction: isize) -> usize {
        let next = s as isize + direction;
        next.clamp(0, self.config.num_states as isize - 1) as usize
    }
}

impl<F: Scalar> Environment<F> for ChainEnv<F> {
    fn num_states(&self) -> usize {
        self.config.num_states
    }

    fn num_actions(&self) -> usize {
        NUM_ACTIONS
    }

    fn horizon(&self) -> usize {
        self.config.horizon
    }

    fn initial_state(&self) -> usize {
        0
    }

    fn step<R: Rng + ?Sized>(
        &self,
        h: usize,
        s: usize,
        a: usize,
        rng: &mut R,
    ) -> Result<(usize, F), EnvError> {
        self.check_step_inputs(h, s, a)?;
        let reward = self.reward_at(s);
        let intended: isize = if a == RIGHT { 1 } else { -1 };
        let success = F::unit_draw(rng) < self.config.success_probability;
        let direction = if success { intended } else { -intended };
        Ok((self.moved(s, direction), reward))
    }

    fn to_model(&self) -> MdpModel<F> {
        let (horizon, num_states) = (self.config.horizon, self.config.num_states);
        let p = self.config.success_probability;
        let mut transition = Array4::zeros((horizon, num_states, NUM_ACTIONS, num_states));
        let mut reward = Array3::zeros((horizon, num_states, NUM_ACTIONS));
        for h in 0..horizon {
            for s in 0..num_states {
                for a in 0..NUM_ACTIONS {
                    let intended: isize = if a == RIGHT { 1 } else { -1 };
                    transition[[h, s, a, self.moved(s, intended)]] += p;
                    transition[[h, s, a, self.moved(s, -intended)]] += F::one() - p;
                    reward[[h, s, a]] = self.reward_at(s);
                }
            }
        }
        MdpModel::new(transition, reward, 0).expect("chain kernel is stochastic by construction")
    }
}
