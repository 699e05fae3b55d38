use ndarray::{Array2, Array3, Array4};

use crate::agent::config::{AgentConfig, AgentConfigError};
use crate::mdp::{argmax_first, DeterministicPolicy};
use crate::scalar::Scalar;

/// All tables of one learner. Owned by exactly one run; every update mutates
/// only the state passed to it.
///
/// Step indices are 0-based: `h` in `0..H` for Q-type tables, `0..=H` for
/// value tables (row `H` stays at its zero initialization).
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerState<F> {
    /// Policy table `Q_h(s,a)`; its argmax drives action selection. Entries
    /// never increase over updates.
    pub policy_q: Array3<F>,
    /// Exploit ensemble `[j, h, s, a]`, mixed with heavy Beta weights.
    pub exploit_ensemble: Array4<F>,
    /// Explore ensemble `[j, h, s, a]`, mixed with light Beta weights.
    pub explore_ensemble: Array4<F>,
    /// Explore aggregate table, rewritten from the best ensemble member.
    pub explore_q: Array3<F>,
    /// Exploit value table `[h, s]` for `h` in `0..=H`.
    pub exploit_value: Array2<F>,
    /// Explore value table `[h, s]` for `h` in `0..=H`.
    pub explore_value: Array2<F>,
    /// Processed-visit counters `N_h(s,a)`.
    pub visits: Array3<u32>,
    /// Initialization vector `V⁰`, indexed `0..=H`; the upper clip bound of
    /// the exploit value table.
    pub init_value: Vec<F>,
    /// Visit count at which the next staged update fires, per `(h, s, a)`.
    pub stage_next: Array3<u32>,
}

impl<F: Scalar> LearnerState<F> {
    /// Fresh tables: value tables at `V⁰_h`, all Q-type tables at `V⁰_{h+1}`,
    /// zero visit counts, stage thresholds at the configured initial value.
    pub fn init(
        config: &AgentConfig<F>,
        num_states: usize,
        num_actions: usize,
    ) -> Result<Self, AgentConfigError> {
        config.validate()?;
        let horizon = config.horizon;
        let scale: F = config.init_scale.factor();
        let init_value: Vec<F> = (0..=horizon)
            .map(|h| scale * F::from_count(horizon - h))
            .collect();

        let values = Array2::from_shape_fn((horizon + 1, num_states), |(h, _)| init_value[h]);
        let q_init = |h: usize| init_value[h + 1];
        let q_tables = Array3::from_shape_fn((horizon, num_states, num_actions), |(h, _, _)| q_init(h));
        let ensembles = Array4::from_shape_fn(
            (config.ensemble_size, horizon, num_states, num_actions),
            |(_, h, _, _)| q_init(h),
        );

        Ok(Self {
            policy_q: q_tables.clone(),
            exploit_ensemble: ensembles.clone(),
            explore_ensemble: ensembles,
            explore_q: q_tables,
            exploit_value: values.clone(),
            explore_value: values,
            visits: Array3::zeros((horizon, num_states, num_actions)),
            init_value,
            stage_next: Array3::from_elem(
                (horizon, num_states, num_actions),
                config.stage_initial,
            ),
        })
    }

    pub fn horizon(&self) -> usize {
        self.policy_q.dim().0
    }

    pub fn num_states(&self) -> usize {
        self.policy_q.dim().1
    }

    pub fn num_actions(&self) -> usize {
        self.policy_q.dim().2
    }

    /// Smallest-index argmax of the policy table row at `(h, s)`.
    pub fn select_action(&self, h: usize, s: usize) -> usize {
        argmax_first(self.policy_q.slice(ndarray::s![h, s, ..]).iter().copied())
    }

    /// The greedy policy induced by the current policy table.
    pub fn greedy_policy(&self) -> DeterministicPolicy {
        let actions = Array2::from_shape_fn((self.horizon(), self.num_states()), |(h, s)| {
            self.select_action(h, s)
        });
        DeterministicPolicy::new(actions)
    }

    /// Checks the running invariants: every table within `[0, V⁰_1]`, visit
    /// counters summing to the number of processed episodes at every step.
    pub fn check_invariants(&self, episodes_processed: usize) -> Result<(), String> {
        let bound = self.init_value[0];
        let in_range = |x: &F| x.is_finite() && *x >= F::zero() && *x <= bound;
        let checks = [
            ("policy_q", self.policy_q.iter().all(in_range)),
            ("explore_q", self.explore_q.iter().all(in_range)),
            ("exploit_ensemble", self.exploit_ensemble.iter().all(in_range)),
            ("explore_ensemble", self.explore_ensemble.iter().all(in_range)),
            ("exploit_value", self.exploit_value.iter().all(in_range)),
            ("explore_value", self.explore_value.iter().all(in_range)),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(format!("{name} left the [0, {bound}] range"));
            }
        }
        for h in 0..self.horizon() {
            let total: u64 = self
                .visits
                .slice(ndarray::s![h, .., ..])
                .iter()
                .map(|&n| u64::from(n))
                .sum();
            if total != episodes_processed as u64 {
                return Err(format!(
                    "step {h} has {total} processed visits after {episodes_processed} episodes"
                ));
            }
        }
        Ok(())
    }
}
