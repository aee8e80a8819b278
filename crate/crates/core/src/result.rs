use std::time::Duration;

use crate::graph::{NodeId, WicGraph};
use crate::scalar::Scalar;

/// Outcome of a seed-selection run: the ordered seed set plus the internal
/// score each step was selected at and cumulative wall time per step.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedResult<T> {
    /// Seeds in selection order.
    pub seeds: Vec<NodeId>,
    /// Internal score at the moment of each selection (marginal spread
    /// estimate for greedy, residual value for weight-reset, rank score for
    /// the baselines).
    pub step_scores: Vec<T>,
    /// Estimated sigma of the running seed set after each step, where the
    /// algorithm tracks it (greedy does; the others leave this empty).
    pub sigma_per_step: Vec<T>,
    /// Cumulative selection time through each step, including any
    /// pre-treatment the algorithm performs.
    pub step_times: Vec<Duration>,
    /// Total selection time.
    pub total_time: Duration,
}

impl<T: Scalar> SeedResult<T> {
    pub fn new() -> Self {
        SeedResult {
            seeds: Vec::new(),
            step_scores: Vec::new(),
            sigma_per_step: Vec::new(),
            step_times: Vec::new(),
            total_time: Duration::ZERO,
        }
    }

    /// Seeds translated back to the labels of the input edge list.
    pub fn labelled_seeds(&self, g: &WicGraph<T>) -> Vec<u64> {
        self.seeds.iter().map(|&s| g.label(s)).collect()
    }
}

impl<T: Scalar> Default for SeedResult<T> {
    fn default() -> Self {
        Self::new()
    }
}
