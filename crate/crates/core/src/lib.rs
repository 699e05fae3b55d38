//! Episodic tabular reinforcement-learning benchmark core: exact
//! finite-horizon MDP solvers, two exploration-hard environments, and the
//! posterior-sampling learner family evaluated on them.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix double precision, which is what the benchmark
//! harness runs at.

pub mod agent;
pub mod envs;
pub mod mdp;
pub mod rng;
pub mod scalar;

pub use scalar::Scalar;

pub type Mdp64 = mdp::MdpModel<f64>;
pub type ValueSolution64 = mdp::ValueSolution<f64>;
pub type Trajectory64 = mdp::Trajectory<f64>;
pub type AgentConfig64 = agent::AgentConfig<f64>;
pub type LearnerState64 = agent::LearnerState<f64>;
pub type LearningRun64 = agent::LearningRun<f64>;
pub type BdclConfig64 = envs::BdclConfig<f64>;
pub type BdclEnv64 = envs::BdclEnv<f64>;
pub type ChainConfig64 = envs::ChainConfig<f64>;
pub type ChainEnv64 = envs::ChainEnv<f64>;
