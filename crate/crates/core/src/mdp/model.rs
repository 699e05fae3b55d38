use ndarray::{Array2, Array3, Array4};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum MdpError {
    #[error("transition table has shape {transition:?} but reward table has shape {reward:?}")]
    ShapeMismatch {
        transition: Vec<usize>,
        reward: Vec<usize>,
    },
    #[error("model dimensions must be positive, got H={horizon} S={num_states} A={num_actions}")]
    EmptyDimension {
        horizon: usize,
        num_states: usize,
        num_actions: usize,
    },
    #[error("initial state {0} out of range")]
    InitialStateOutOfRange(usize),
    #[error("transition probability at (h={h}, s={s}, a={a}) is negative or not finite")]
    BadProbability { h: usize, s: usize, a: usize },
    #[error("transition row at (h={h}, s={s}, a={a}) sums to {sum}, not 1")]
    NotStochastic { h: usize, s: usize, a: usize, sum: f64 },
    #[error("reward at (h={h}, s={s}, a={a}) is {value}, outside [0, 1]")]
    RewardOutOfRange { h: usize, s: usize, a: usize, value: f64 },
    #[error("policy has shape {policy:?} but the model expects [{horizon}, {num_states}]")]
    PolicyShapeMismatch {
        policy: Vec<usize>,
        horizon: usize,
        num_states: usize,
    },
    #[error("policy action {action} at (h={h}, s={s}) out of range for {num_actions} actions")]
    PolicyActionOutOfRange {
        h: usize,
        s: usize,
        action: usize,
        num_actions: usize,
    },
}

/// Exact tabular finite-horizon MDP.
///
/// Step dynamics may differ across the `H` in-episode steps but are stationary
/// across episodes, so one model serves a whole learning run. Transition rows
/// are validated (and normalized away from float noise) at construction;
/// rewards must lie in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MdpModel<F> {
    horizon: usize,
    num_states: usize,
    num_actions: usize,
    /// `P_h(s' | s, a)`, indexed `[h, s, a, s']` with `h` in `0..H`.
    transition: Array4<F>,
    /// `r_h(s, a)`, indexed `[h, s, a]`.
    reward: Array3<F>,
    initial_state: usize,
}

impl<F: Scalar> MdpModel<F> {
    pub fn new(
        transition: Array4<F>,
        reward: Array3<F>,
        initial_state: usize,
    ) -> Result<Self, MdpError> {
        let (horizon, num_states, num_actions, next_states) = transition.dim();
        if reward.dim() != (horizon, num_states, num_actions) || next_states != num_states {
            return Err(MdpError::ShapeMismatch {
                transition: transition.shape().to_vec(),
                reward: reward.shape().to_vec(),
            });
        }
        if horizon == 0 || num_states == 0 || num_actions == 0 {
            return Err(MdpError::EmptyDimension {
                horizon,
                num_states,
                num_actions,
            });
        }
        if initial_state >= num_states {
            return Err(MdpError::InitialStateOutOfRange(initial_state));
        }
        let mut model = Self {
            horizon,
            num_states,
            num_actions,
            transition,
            reward,
            initial_state,
        };
        model.normalize_rows()?;
        model.validate()?;
        Ok(model)
    }

    /// Divides each transition row by its sum, provided the sum is already
    /// within `normalize_tolerance` of 1. Larger deviations indicate a
    /// construction bug rather than float noise and are rejected.
    fn normalize_rows(&mut self) -> Result<(), MdpError> {
        let tol = F::normalize_tolerance();
        for h in 0..self.horizon {
            for s in 0..self.num_states {
                for a in 0..self.num_actions {
                    let mut sum = F::zero();
                    for s2 in 0..self.num_states {
                        let p = self.transition[[h, s, a, s2]];
                        if !p.is_finite() || p < F::zero() {
                            return Err(MdpError::BadProbability { h, s, a });
                        }
                        sum += p;
                    }
                    if (sum - F::one()).abs() > tol {
                        return Err(MdpError::NotStochastic {
                            h,
                            s,
                            a,
                            sum: sum.to_f64().unwrap_or(f64::NAN),
                        });
                    }
                    for s2 in 0..self.num_states {
                        self.transition[[h, s, a, s2]] = self.transition[[h, s, a, s2]] / sum;
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks the stochasticity and reward-range invariants.
    pub fn validate(&self) -> Result<(), MdpError> {
        let tol = F::prob_sum_tolerance();
        for h in 0..self.horizon {
            for s in 0..self.num_states {
                for a in 0..self.num_actions {
                    let mut sum = F::zero();
                    for s2 in 0..self.num_states {
                        let p = self.transition[[h, s, a, s2]];
                        if !p.is_finite() || p < F::zero() {
                            return Err(MdpError::BadProbability { h, s, a });
                        }
                        sum += p;
                    }
                    if (sum - F::one()).abs() > tol {
                        return Err(MdpError::NotStochastic {
                            h,
                            s,
                            a,
                            sum: sum.to_f64().unwrap_or(f64::NAN),
                        });
                    }
                    let r = self.reward[[h, s, a]];
                    if !r.is_finite() || r < F::zero() || r > F::one() {
                        return Err(MdpError::RewardOutOfRange {
                            h,
                            s,
                            a,
                            value: r.to_f64().unwrap_or(f64::NAN),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn initial_state(&self) -> usize {
        self.initial_state
    }

    /// `P_h(s' | s, a)` with `h` in `0..H`.
    pub fn transition(&self, h: usize, s: usize, a: usize, next: usize) -> F {
        self.transition[[h, s, a, next]]
    }

    /// `r_h(s, a)` with `h` in `0..H`.
    pub fn reward(&self, h: usize, s: usize, a: usize) -> F {
        self.reward[[h, s, a]]
    }

    /// Checks a policy's shape and action range against this model.
    pub fn check_policy(&self, policy: &DeterministicPolicy) -> Result<(), MdpError> {
        if policy.actions.dim() != (self.horizon, self.num_states) {
            return Err(MdpError::PolicyShapeMismatch {
                policy: policy.actions.shape().to_vec(),
                horizon: self.horizon,
                num_states: self.num_states,
            });
        }
        for ((h, s), &a) in policy.actions.indexed_iter() {
            if a >= self.num_actions {
                return Err(MdpError::PolicyActionOutOfRange {
                    h,
                    s,
                    action: a,
                    num_actions: self.num_actions,
                });
            }
        }
        Ok(())
    }
}

/// Step-indexed deterministic policy: one action per `(h, s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicPolicy {
    /// `π_h(s)`, indexed `[h, s]` with `h` in `0..H`.
    pub actions: Array2<usize>,
}

impl DeterministicPolicy {
    pub fn new(actions: Array2<usize>) -> Self {
        Self { actions }
    }

    /// Policy playing the same action at every `(h, s)`.
    pub fn constant(horizon: usize, num_states: usize, action: usize) -> Self {
        Self {
            actions: Array2::from_elem((horizon, num_states), action),
        }
    }

    pub fn action(&self, h: usize, s: usize) -> usize {
        self.actions[[h, s]]
    }
}

/// Optimal-value solve produced by [`backward_induction`](crate::mdp::backward_induction).
#[derive(Debug, Clone, PartialEq)]
pub struct ValueSolution<F> {
    /// `V_h(s)`, indexed `[h, s]` with `h` in `0..=H`; row `H` is zero.
    pub values: Array2<F>,
    /// `Q_h(s, a)`, indexed `[h, s, a]` with `h` in `0..H`.
    pub action_values: Array3<F>,
    /// Greedy policy, smallest action index on ties.
    pub greedy: DeterministicPolicy,
}

#[derive(Debug, Error, PartialEq)]
pub enum TrajectoryError {
    #[error("path has {path_len} entries but {num_rewards} rewards require {expected}")]
    PathLengthMismatch {
        path_len: usize,
        num_rewards: usize,
        expected: usize,
    },
    #[error("trajectory has no rewards")]
    Empty,
    #[error("reward {value} at step {step} outside [0, 1]")]
    RewardOutOfRange { step: usize, value: f64 },
}

/// One episode's record: the `(state, action)` path and per-step rewards.
///
/// The path has `H + 1` entries; the last carries the post-episode state
/// together with a sentinel action that no update ever reads.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<F> {
    path: Vec<(usize, usize)>,
    rewards: Vec<F>,
}

/// Action stored alongside the post-episode state in `path[H]`.
pub const SENTINEL_ACTION: usize = 0;

impl<F: Scalar> Trajectory<F> {
    pub fn new(path: Vec<(usize, usize)>, rewards: Vec<F>) -> Result<Self, TrajectoryError> {
        if rewards.is_empty() {
            return Err(TrajectoryError::Empty);
        }
        if path.len() != rewards.len() + 1 {
            return Err(TrajectoryError::PathLengthMismatch {
                path_len: path.len(),
                num_rewards: rewards.len(),
                expected: rewards.len() + 1,
            });
        }
        for (step, &r) in rewards.iter().enumerate() {
            if !r.is_finite() || r < F::zero() || r > F::one() {
                return Err(TrajectoryError::RewardOutOfRange {
                    step,
                    value: r.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self { path, rewards })
    }

    /// Number of steps recorded (the episode horizon).
    pub fn horizon(&self) -> usize {
        self.rewards.len()
    }

    /// `(s_h, a_h)` for `h` in `0..H`; index `H` is the post-episode entry.
    pub fn step(&self, h: usize) -> (usize, usize) {
        self.path[h]
    }

    pub fn reward(&self, h: usize) -> F {
        self.rewards[h]
    }

    pub fn total_reward(&self) -> F {
        self.rewards.iter().copied().sum()
    }
}
