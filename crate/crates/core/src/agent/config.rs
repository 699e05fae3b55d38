use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// Order in which an episode's transitions are processed by the updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassDirection {
    /// Process steps `H..1` at episode end, so step `i` sees value tables
    /// already refreshed by steps `i+1..H` of the same episode.
    Backward,
    /// Process each transition as it is observed, in chronological order.
    Forward,
}

/// When the explore aggregate table and value table are rewritten.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateTiming {
    PerStep,
    /// Deferred to visit-count stage boundaries.
    Staged,
}

/// Whether the explore ensemble is periodically re-initialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResetSchedule {
    Never,
    /// Reset to the initialization value at each stage boundary.
    Staged,
}

/// Scale of the optimistic value initialization `V⁰`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitScale {
    /// `H − h + 1`: the tightest upper bound on remaining return.
    Informed,
    /// `2(H − h + 1)`: the slack initialization of the baseline.
    Doubled,
}

impl InitScale {
    pub fn factor<F: Scalar>(self) -> F {
        match self {
            InitScale::Informed => F::one(),
            InitScale::Doubled => F::cast(2.0),
        }
    }
}

/// Coefficient on the exploit-ensemble term of the policy-table update.
/// The explore term is always weighted by the mixing rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExploitMix {
    Eta,
    OneMinusEta,
}

/// Which action column the explore-aggregate write reads its ensemble entry
/// at. `Greedy` follows the published pseudocode; `Taken` is the variant in
/// case the index there is a typo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExploreReadAction {
    Greedy,
    Taken,
}

/// Which table defines the greedy action the value relays read at.
///
/// `ExploitEnsemble` takes the argmax of `max_j Q̃ʲ(s, ·)`, keeping the relay
/// independent of the policy table's scale; `PolicyTable` is the literal
/// pseudocode reading, under which the relay follows the argmax of the
/// (heavily down-weighted) policy table and long-horizon value propagation
/// stalls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedySource {
    ExploitEnsemble,
    PolicyTable,
}

/// The explore-side term of the policy-table blend.
///
/// `StateValue` uses the explore value `V̆(s)` (the max over the aggregate
/// row), which keeps the unexplored-action optimism floor in the blend;
/// `TakenEntry` is the literal pseudocode reading `Q̆(s, a)`, under which a
/// single early failure can bury an action for good.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyExploreTerm {
    StateValue,
    TakenEntry,
}

/// The five benchmark agents. The baseline and its three single-component
/// ablations differ from the headline learner only in the five variant flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantPreset {
    Reversedq,
    Randomizedq,
    RandomizedqBackward,
    RandomizedqUpdate,
    RandomizedqInit,
}

impl VariantPreset {
    pub const ALL: [VariantPreset; 5] = [
        VariantPreset::Randomizedq,
        VariantPreset::RandomizedqBackward,
        VariantPreset::RandomizedqInit,
        VariantPreset::RandomizedqUpdate,
        VariantPreset::Reversedq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VariantPreset::Reversedq => "reversedq",
            VariantPreset::Randomizedq => "randomizedq",
            VariantPreset::RandomizedqBackward => "randomizedq-backward",
            VariantPreset::RandomizedqUpdate => "randomizedq-update",
            VariantPreset::RandomizedqInit => "randomizedq-init",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }
}

impl std::str::FromStr for VariantPreset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_name(s).ok_or_else(|| format!("unknown variant preset `{s}`"))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum AgentConfigError {
    #[error("ensemble size must be at least 1")]
    EmptyEnsemble,
    #[error("inflation coefficient must be positive, got {0}")]
    InflationNotPositive(f64),
    #[error("prior transition count must be positive, got {0}")]
    PriorTransitionsNotPositive(f64),
    #[error("mixing rate must lie in (0, 1/2], got {0}")]
    MixingRateOutOfRange(f64),
    #[error("stage growth factor must exceed 1, got {0}")]
    StageGrowthTooSmall(f64),
    #[error("the initial stage threshold must be at least 1")]
    ZeroStageThreshold,
    #[error("horizon must be at least 1")]
    ZeroHorizon,
}

/// Hyperparameters and variant flags of the posterior-sampling learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig<F> {
    /// Number of ensemble members `J`.
    pub ensemble_size: usize,
    /// Inflation coefficient `κ` dividing both Beta shape parameters.
    pub inflation: F,
    /// Prior transition count `n₀` added to the visit count.
    pub prior_transitions: F,
    /// Mixing rate `η`, defaulting to `1/(√H + 1)`.
    pub mixing_rate: F,
    pub pass_direction: PassDirection,
    pub explore_update_timing: UpdateTiming,
    pub explore_reset: ResetSchedule,
    pub init_scale: InitScale,
    pub exploit_mix: ExploitMix,
    /// Geometric growth factor of the staged-update visit thresholds.
    pub stage_growth: F,
    /// First visit count at which a staged update fires.
    pub stage_initial: u32,
    pub explore_read_action: ExploreReadAction,
    pub greedy_source: GreedySource,
    pub policy_explore_term: PolicyExploreTerm,
    /// Episode length the learner's tables are sized for.
    pub horizon: usize,
}

impl<F: Scalar> AgentConfig<F> {
    /// Benchmark defaults for the given preset and environment dimensions:
    /// `J = 10`, `κ = 1`, `n₀ = 1/S`, `η = 1/(√H + 1)`, stage thresholds
    /// starting at `H` and growing by `1 + 1/H`.
    pub fn preset(preset: VariantPreset, horizon: usize, num_states: usize) -> Self {
        let h = F::from_count(horizon);
        let mut config = Self {
            ensemble_size: 10,
            inflation: F::one(),
            prior_transitions: F::one() / F::from_count(num_states),
            mixing_rate: F::one() / (h.sqrt() + F::one()),
            pass_direction: PassDirection::Backward,
            explore_update_timing: UpdateTiming::PerStep,
            explore_reset: ResetSchedule::Never,
            init_scale: InitScale::Informed,
            exploit_mix: ExploitMix::Eta,
            stage_growth: F::one() + F::one() / h,
            stage_initial: horizon as u32,
            explore_read_action: ExploreReadAction::Greedy,
            greedy_source: GreedySource::ExploitEnsemble,
            policy_explore_term: PolicyExploreTerm::StateValue,
            horizon,
        };
        config.apply_preset(preset);
        config
    }

    /// Sets the five variant flags to the preset's values, leaving the
    /// numeric hyperparameters untouched.
    pub fn apply_preset(&mut self, preset: VariantPreset) {
        let (direction, timing, reset, scale, mix) = match preset {
            VariantPreset::Reversedq => (
                PassDirection::Backward,
                UpdateTiming::PerStep,
                ResetSchedule::Never,
                InitScale::Informed,
                ExploitMix::Eta,
            ),
            VariantPreset::Randomizedq => (
                PassDirection::Forward,
                UpdateTiming::Staged,
                ResetSchedule::Staged,
                InitScale::Doubled,
                ExploitMix::OneMinusEta,
            ),
            VariantPreset::RandomizedqBackward => (
                PassDirection::Backward,
                UpdateTiming::Staged,
                ResetSchedule::Staged,
                InitScale::Doubled,
                ExploitMix::OneMinusEta,
            ),
            VariantPreset::RandomizedqUpdate => (
                PassDirection::Forward,
                UpdateTiming::PerStep,
                ResetSchedule::Never,
                InitScale::Doubled,
                ExploitMix::Eta,
            ),
            VariantPreset::RandomizedqInit => (
                PassDirection::Forward,
                UpdateTiming::Staged,
                ResetSchedule::Staged,
                InitScale::Informed,
                ExploitMix::OneMinusEta,
            ),
        };
        self.pass_direction = direction;
        self.explore_update_timing = timing;
        self.explore_reset = reset;
        self.init_scale = scale;
        self.exploit_mix = mix;
    }

    pub fn validate(&self) -> Result<(), AgentConfigError> {
        if self.ensemble_size == 0 {
            return Err(AgentConfigError::EmptyEnsemble);
        }
        if self.horizon == 0 {
            return Err(AgentConfigError::ZeroHorizon);
        }
        let as_f64 = |x: F| x.to_f64().unwrap_or(f64::NAN);
        if !(self.inflation > F::zero() && self.inflation.is_finite()) {
            return Err(AgentConfigError::InflationNotPositive(as_f64(self.inflation)));
        }
        if !(self.prior_transitions > F::zero() && self.prior_transitions.is_finite()) {
            return Err(AgentConfigError::PriorTransitionsNotPositive(as_f64(
                self.prior_transitions,
            )));
        }
        if !(self.mixing_rate > F::zero() && self.mixing_rate <= F::cast(0.5)) {
            return Err(AgentConfigError::MixingRateOutOfRange(as_f64(self.mixing_rate)));
        }
        if !(self.stage_growth > F::one() && self.stage_growth.is_finite()) {
            return Err(AgentConfigError::StageGrowthTooSmall(as_f64(self.stage_growth)));
        }
        if self.stage_initial == 0 {
            return Err(AgentConfigError::ZeroStageThreshold);
        }
        Ok(())
    }
}
