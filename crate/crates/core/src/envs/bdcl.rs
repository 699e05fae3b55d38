use ndarray::{Array2, Array3, Array4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::envs::{EnvError, Environment};
use crate::mdp::MdpModel;
use crate::scalar::Scalar;

/// Parameters of the bidirectional diabolical combination lock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BdclConfig<F> {
    pub num_actions: usize,
    pub horizon: usize,
    /// Probability that a step is overridden to the sink regardless of the
    /// chosen action.
    pub fail_probability: F,
    pub lock1_reward: F,
    pub lock2_reward: F,
    /// Per-step sink reward, `1/(8H)` by default so a full episode in the
    /// sink earns at most `1/8`.
    pub sink_reward: F,
    /// Seed for sampling the per-(lock, step) progress actions.
    pub structure_seed: u64,
}

impl<F: Scalar> BdclConfig<F> {
    pub fn new(
        num_actions: usize,
        horizon: usize,
        fail_probability: F,
        structure_seed: u64,
    ) -> Self {
        Self {
            num_actions,
            horizon,
            fail_probability,
            lock1_reward: F::cast(0.25),
            lock2_reward: F::one(),
            sink_reward: F::one() / (F::cast(8.0) * F::from_count(horizon)),
            structure_seed,
        }
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let err = |msg: String| Err(EnvError::InvalidConfig(msg));
        if self.num_actions < 2 {
            return err(format!("BDCL needs at least 2 actions, got {}", self.num_actions));
        }
        if self.horizon < 2 {
            return err(format!("BDCL needs horizon >= 2, got {}", self.horizon));
        }
        if !(self.fail_probability >= F::zero() && self.fail_probability < F::one()) {
            return err("fail probability must lie in [0, 1)".into());
        }
        let eighth = F::one() / F::cast(8.0);
        let sink_total = self.sink_reward * F::from_count(self.horizon);
        if !(self.sink_reward >= F::zero() && sink_total <= eighth) {
            return err("sink reward over a full episode must not exceed 1/8".into());
        }
        if !(eighth < self.lock1_reward && self.lock1_reward < self.lock2_reward) {
            return err("lock rewards must satisfy 1/8 < lock1 < lock2".into());
        }
        if self.lock2_reward > F::one() {
            return err("lock rewards must not exceed 1".into());
        }
        Ok(())
    }
}

impl<F: Scalar> Default for BdclConfig<F> {
    /// The benchmark setting: 5 actions, horizon 5, 2% failure.
    fn default() -> Self {
        Self::new(5, 5, F::cast(0.02), 0)
    }
}

/// The bidirectional diabolical combination lock.
///
/// Four states: two reward locks reached from the start by the first action,
/// and an absorbing low-reward sink. While on a lock, exactly one progress
/// action per step keeps the agent there; anything else drops it into the
/// sink, as does the failure override. Lock occupancy at the final step pays
/// the lock's terminal reward.
#[derive(Debug, Clone, PartialEq)]
pub struct BdclEnv<F> {
    config: BdclConfig<F>,
    /// Boundary between the action groups routing to lock 1 and lock 2.
    route_split: usize,
    /// Progress action per `(lock, step)`, sampled once at construction and
    /// fixed for the lifetime of the environment. Indexed `[lock, h]` with
    /// `h` in `0..H-1`.
    progress_actions: Array2<usize>,
}

pub const START: usize = 0;
pub const SINK: usize = 1;
pub const LOCK1: usize = 2;
pub const LOCK2: usize = 3;
const NUM_STATES: usize = 4;

impl<F: Scalar> BdclEnv<F> {
    pub fn new(config: BdclConfig<F>) -> Result<Self, EnvError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.structure_seed);
        let mut progress_actions = Array2::zeros((2, config.horizon - 1));
        for lock in 0..2 {
            for h in 0..config.horizon - 1 {
                progress_actions[[lock, h]] = rng.random_range(0..config.num_actions);
            }
        }
        let route_split = (config.num_actions - 1) / 2;
        Ok(Self {
            config,
            route_split,
            progress_actions,
        })
    }

    pub fn config(&self) -> &BdclConfig<F> {
        &self.config
    }

    /// The action that keeps the agent on the given lock (0 or 1) at step `h`.
    pub fn progress_action(&self, lock: usize, h: usize) -> usize {
        self.progress_actions[[lock, h]]
    }

    /// Reward for taking any action in `s` at step `h`. Terminal lock rewards
    /// depend only on occupancy when the action is taken, so a failure at the
    /// last step cannot void them.
    fn reward_at(&self, h: usize, s: usize) -> F {
        let last = self.config.horizon - 1;
        match s {
            START => F::zero(),
            SINK => self.config.sink_reward,
            LOCK1 if h == last => self.config.lock1_reward,
            LOCK2 if h == last => self.config.lock2_reward,
            _ => F::zero(),
        }
    }

    /// Next state before the failure override.
    fn intended_next(&self, h: usize, s: usize, a: usize) -> usize {
        let last = self.config.horizon - 1;
        match s {
            START => {
                if a <= self.route_split {
                    LOCK1
                } else {
                    LOCK2
                }
            }
            SINK => SINK,
            lock => {
                let lock_idx = lock - LOCK1;
                if h == last || a == self.progress_actions[[lock_idx, h]] {
                    lock
                } else {
                    SINK
                }
            }
        }
    }
}

impl<F: Scalar> Environment<F> for BdclEnv<F> {
    fn num_states(&self) -> usize {
        NUM_STATES
    }

    fn num_actions(&self) -> usize {
        self.config.num_actions
    }

    fn horizon(&self) -> usize {
        self.config.horizon
    }

    fn initial_state(&self) -> usize {
        START
    }

    fn step<R: Rng + ?Sized>(
        &self,
        h: usize,
        s: usize,
        a: usize,
        rng: &mut R,
    ) -> Result<(usize, F), EnvError> {
        self.check_step_inputs(h, s, a)?;
        let reward = self.reward_at(h, s);
        let next = if F::unit_draw(rng) < self.config.fail_probability {
            SINK
        } else {
            self.intended_next(h, s, a)
        };
        Ok((next, reward))
    }

    fn to_model(&self) -> MdpModel<F> {
        let (horizon, num_actions) = (self.config.horizon, self.config.num_actions);
        let p_fail = self.config.fail_probability;
        let mut transition = Array4::zeros((horizon, NUM_STATES, num_actions, NUM_STATES));
        let mut reward = Array3::zeros((horizon, NUM_STATES, num_actions));
        for h in 0..horizon {
            for s in 0..NUM_STATES {
                for a in 0..num_actions {
                    transition[[h, s, a, self.intended_next(h, s, a)]] += F::one() - p_fail;
                    transition[[h, s, a, SINK]] += p_fail;
                    reward[[h, s, a]] = self.reward_at(h, s);
                }
            }
        }
        MdpModel::new(transition, reward, START).expect("BDCL kernel is stochastic by construction")
    }
}
