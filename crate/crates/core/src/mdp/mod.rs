//! Finite-horizon tabular MDPs and their exact dynamic-programming solvers.

mod model;
mod solve;

pub use model::{
    DeterministicPolicy, MdpError, MdpModel, Trajectory, TrajectoryError, ValueSolution,
    SENTINEL_ACTION,
};
pub use solve::{backward_induction, evaluate_policy, evaluate_uniform_policy, regret};

pub(crate) use solve::argmax_first;
