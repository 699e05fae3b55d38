//! The posterior-sampling learner: Beta-weighted exploit/explore ensembles,
//! accelerated value updates, and the variant flags distinguishing the
//! backward per-step learner from the staged forward baseline and its
//! ablations.

mod config;
mod runner;
mod state;
mod updates;

pub use config::{
    AgentConfig, AgentConfigError, ExploitMix, ExploreReadAction, GreedySource, InitScale,
    PassDirection, PolicyExploreTerm, ResetSchedule, UpdateTiming, VariantPreset,
};
pub use runner::{run_learning, LearningRun};
pub use state::LearnerState;
pub use updates::{
    beta_sample, ensemble_update, mix_weight_shapes, process_episode, process_transition,
    sample_mix_weights, value_and_policy_update, AgentError,
};
