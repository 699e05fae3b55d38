//! Benchmark environments: the bidirectional diabolical combination lock and
//! the chain MDP, each with a generative step function and an exact tabular
//! model export of the same law.

pub mod bdcl;
pub mod chain;

use rand::Rng;
use thiserror::Error;

pub use bdcl::{BdclConfig, BdclEnv};
pub use chain::{ChainConfig, ChainEnv};

use crate::mdp::MdpModel;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum EnvError {
    #[error("step index {h} out of range for horizon {horizon}")]
    StepOutOfRange { h: usize, horizon: usize },
    #[error("state {s} out of range for {num_states} states")]
    StateOutOfRange { s: usize, num_states: usize },
    #[error("action {a} out of range for {num_actions} actions")]
    ActionOutOfRange { a: usize, num_actions: usize },
    #[error("invalid environment configuration: {0}")]
    InvalidConfig(String),
}

/// An episodic simulator. Environments are immutable after construction; the
/// random stream is an explicit parameter, so concurrent use with independent
/// streams is safe.
pub trait Environment<F: Scalar> {
    fn num_states(&self) -> usize;
    fn num_actions(&self) -> usize;
    fn horizon(&self) -> usize;
    fn initial_state(&self) -> usize;

    /// Samples `(next_state, reward)` for taking `a` in `s` at step `h`
    /// (0-based, `0..H`).
    fn step<R: Rng + ?Sized>(
        &self,
        h: usize,
        s: usize,
        a: usize,
        rng: &mut R,
    ) -> Result<(usize, F), EnvError>;

    /// The exact law of [`step`](Environment::step) as a tabular model.
    fn to_model(&self) -> MdpModel<F>;

    fn check_step_inputs(&self, h: usize, s: usize, a: usize) -> Result<(), EnvError> {
        if h >= self.horizon() {
            return Err(EnvError::StepOutOfRange {
                h,
                horizon: self.horizon(),
            });
        }
        if s >= self.num_states() {
            return Err(EnvError::StateOutOfRange {
                s,
                num_states: self.num_states(),
            });
        }
        if a >= self.num_actions() {
            return Err(EnvError::ActionOutOfRange {
                a,
                num_actions: self.num_actions(),
            });
        }
        Ok(())
    }
}
