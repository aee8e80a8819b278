//! Hill-climbing greedy seed selection with Monte Carlo marginal gains: the
//! accuracy baseline. Each round evaluates every remaining candidate's
//! estimated spread on top of the current seed set and keeps the best.
//!
//! The spread estimator is pluggable so tiny-graph tests can swap the Monte
//! Carlo estimate for exact enumeration; candidate evaluations share random
//! streams (common random numbers), which removes most of the noise from the
//! marginal-gain comparison.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use rayon::prelude::*;

use crate::cascade::{estimate_sigma, exact_sigma};
use crate::error::{Error, Result};
use crate::graph::{NodeId, WicGraph};
use crate::result::SeedResult;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyConfig {
    /// Seed set size.
    pub k: usize,
    /// Simulations per candidate evaluation.
    pub reps: usize,
    pub rng_seed: u64,
    /// Lazy (priority-queue) evaluation of stale gains instead of the plain
    /// full sweep per round.
    pub lazy: bool,
}

impl GreedyConfig {
    pub fn new(k: usize) -> Self {
        GreedyConfig {
            k,
            reps: 10_000,
            rng_seed: 0,
            lazy: false,
        }
    }
}

/// Anything that can score a seed set's expected spread.
pub trait SpreadOracle<T>: Sync {
    fn sigma(&self, g: &WicGraph<T>, seeds: &[NodeId]) -> Result<T>;
}

/// Monte Carlo spread with a fixed seed: every evaluation reuses the same
/// repetition streams, so candidates within a round see common random
/// numbers.
pub struct MonteCarloOracle {
    pub reps: usize,
    pub rng_seed: u64,
}

impl<T: Scalar> SpreadOracle<T> for MonteCarloOracle {
    fn sigma(&self, g: &WicGraph<T>, seeds: &[NodeId]) -> Result<T> {
        Ok(estimate_sigma(g, seeds, self.reps, self.rng_seed)?.mean)
    }
}

/// Exact enumeration spread; only viable on tiny graphs.
pub struct ExactOracle;

impl<T: Scalar> SpreadOracle<T> for ExactOracle {
    fn sigma(&self, g: &WicGraph<T>, seeds: &[NodeId]) -> Result<T> {
        exact_sigma(g, seeds)
    }
}

/// Marginal gain of adding `v` to `S`, estimated with common random-number
/// streams on both terms.
pub fn marginal_gain<T: Scalar>(
    g: &WicGraph<T>,
    seeds: &[NodeId],
    v: NodeId,
    reps: usize,
    rng_seed: u64,
) -> Result<T> {
    if seeds.contains(&v) {
        return Err(Error::AlreadySelected { node: v.0 });
    }
    g.check_node(v)?;
    let with: Vec<NodeId> = seeds.iter().copied().chain([v]).collect();
    let base = estimate_sigma(g, seeds, reps, rng_seed)?.mean;
    let extended = estimate_sigma(g, &with, reps, rng_seed)?.mean;
    Ok(extended - base)
}

/// Greedy selection with the Monte Carlo oracle from `cfg`.
pub fn greedy_select<T: Scalar>(g: &WicGraph<T>, cfg: &GreedyConfig) -> Result<SeedResult<T>> {
    let oracle = MonteCarloOracle {
        reps: cfg.reps,
        rng_seed: cfg.rng_seed,
    };
    greedy_select_with(g, cfg.k, cfg.lazy, &oracle)
}

/// Greedy selection against an arbitrary spread oracle.
pub fn greedy_select_with<T: Scalar>(
    g: &WicGraph<T>,
    k: usize,
    lazy: bool,
    oracle: &impl SpreadOracle<T>,
) -> Result<SeedResult<T>> {
    if k > g.node_count() {
        return Err(Error::KTooLarge {
            k,
            count: g.node_count(),
        });
    }
    if lazy {
        lazy_rounds(g, k, oracle)
    } else {
        plain_rounds(g, k, oracle)
    }
}

fn plain_rounds<T: Scalar>(
    g: &WicGraph<T>,
    k: usize,
    oracle: &impl SpreadOracle<T>,
) -> Result<SeedResult<T>> {
    let start = Instant::now();
    let mut result = SeedResult::new();
    let mut in_seed = vec![false; g.node_count()];
    for _ in 0..k {
        // one base evaluation shared by every candidate this round
        let base = oracle.sigma(g, &result.seeds)?;
        let candidates: Vec<NodeId> = g.nodes().filter(|v| !in_seed[v.index()]).collect();
        let gains: Vec<(NodeId, T)> = candidates
            .par_iter()
            .map(|&v| {
                let mut with = result.seeds.clone();
                with.push(v);
                oracle.sigma(g, &with).map(|s| (v, s - base))
            })
            .collect::<Result<_>>()?;
        // argmax, ties to the smallest id (candidates are ascending)
        let (best, gain) = gains
            .iter()
            .copied()
            .reduce(|a, b| if b.1 > a.1 { b } else { a })
            .expect("k <= node_count leaves a candidate");
        in_seed[best.index()] = true;
        result.seeds.push(best);
        result.step_scores.push(gain);
        result.sigma_per_step.push(base + gain);
        result.step_times.push(start.elapsed());
    }
    result.total_time = start.elapsed();
    Ok(result)
}

struct HeapEntry<T> {
    gain: T,
    node: NodeId,
    round: usize,
}

impl<T: PartialOrd> PartialEq for HeapEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: PartialOrd> Eq for HeapEntry<T> {}
impl<T: PartialOrd> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: PartialOrd> Ord for HeapEntry<T> {
    /// Max-heap order: larger gain first, then smaller node id.
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .partial_cmp(&other.gain)
            .expect("finite gains")
            .then_with(|| other.node.cmp(&self.node))
    }
}

fn lazy_rounds<T: Scalar>(
    g: &WicGraph<T>,
    k: usize,
    oracle: &impl SpreadOracle<T>,
) -> Result<SeedResult<T>> {
    let start = Instant::now();
    let mut result = SeedResult::new();
    let mut base = T::zero();
    // initial gains: sigma({v}) since sigma(empty) = 0
    let initial: Vec<(NodeId, T)> = g
        .nodes()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&v| oracle.sigma(g, &[v]).map(|s| (v, s)))
        .collect::<Result<_>>()?;
    let mut heap: BinaryHeap<HeapEntry<T>> = initial
        .into_iter()
        .map(|(node, gain)| HeapEntry {
            gain,
            node,
            round: 0,
        })
        .collect();

    for round in 0..k {
        loop {
            let top = heap.pop().expect("k <= node_count leaves a candidate");
            if top.round == round {
                result.seeds.push(top.node);
                result.step_scores.push(top.gain);
                result.sigma_per_step.push(base + top.gain);
                result.step_times.push(start.elapsed());
                base = oracle.sigma(g, &result.seeds)?;
                break;
            }
            // stale: re-evaluate against the current seed set and re-queue
            let mut with = result.seeds.clone();
            with.push(top.node);
            let gain = oracle.sigma(g, &with)? - base;
            heap.push(HeapEntry {
                gain,
                node: top.node,
                round,
            });
        }
    }
    result.total_time = start.elapsed();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WicGraph;

    /// Hub 0 -> {1,2,3} with p = 1; node 4 isolated. Weights control the
    /// optimum: unit weights favour the hub, a heavy node 4 favours node 4.
    fn hub_vs_heavy(heavy: f64) -> WicGraph<f64> {
        WicGraph::from_weighted_edges(
            5,
            &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)],
            &[1.0, 1.0, 1.0, 1.0, heavy],
        )
        .unwrap()
    }

    #[test]
    fn weighted_mode_prefers_the_heavy_node() {
        let g = hub_vs_heavy(100.0);
        let res = greedy_select_with(&g, 1, false, &ExactOracle).unwrap();
        assert_eq!(res.seeds, vec![NodeId(4)]);
        assert_eq!(res.step_scores[0], 100.0);
    }

    #[test]
    fn unit_weights_prefer_the_hub() {
        let g = hub_vs_heavy(1.0);
        let res = greedy_select_with(&g, 1, false, &ExactOracle).unwrap();
        assert_eq!(res.seeds, vec![NodeId(0)]);
        assert_eq!(res.step_scores[0], 4.0);
    }

    #[test]
    fn monte_carlo_matches_exact_on_the_fixture() {
        let g = hub_vs_heavy(100.0);
        let res = greedy_select(&g, &GreedyConfig::new(1)).unwrap();
        assert_eq!(res.seeds, vec![NodeId(4)]);
    }

    #[test]
    fn k_equal_to_node_count_selects_everything() {
        let g = hub_vs_heavy(1.0);
        let res = greedy_select_with(&g, 5, false, &ExactOracle).unwrap();
        let mut all: Vec<NodeId> = res.seeds.clone();
        all.sort();
        assert_eq!(all, (0..5).map(NodeId).collect::<Vec<_>>());
    }

    #[test]
    fn k_too_large_is_an_error() {
        let g = hub_vs_heavy(1.0);
        let err = greedy_select_with(&g, 6, false, &ExactOracle).unwrap_err();
        assert!(matches!(err, Error::KTooLarge { k: 6, count: 5 }));
    }

    #[test]
    fn determinism_under_fixed_config() {
        let g = hub_vs_heavy(2.0);
        let cfg = GreedyConfig {
            k: 3,
            reps: 500,
            rng_seed: 9,
            lazy: false,
        };
        let a = greedy_select(&g, &cfg).unwrap();
        let b = greedy_select(&g, &cfg).unwrap();
        assert_eq!(a.seeds, b.seeds);
        assert_eq!(a.step_scores, b.step_scores);
    }

    #[test]
    fn lazy_and_plain_agree_with_exact_gains() {
        for (edges, weights) in [
            (
                vec![(0u32, 1u32, 0.5), (0, 2, 0.5), (2, 1, 0.5), (3, 4, 0.9)],
                vec![1.0, 2.0, 1.0, 3.0, 1.0],
            ),
            (
                vec![(0, 1, 1.0), (1, 2, 1.0), (3, 2, 0.5)],
                vec![1.0, 1.0, 5.0, 2.0],
            ),
        ] {
            let g = WicGraph::from_weighted_edges(weights.len(), &edges, &weights).unwrap();
            for k in 1..=3 {
                let plain = greedy_select_with(&g, k, false, &ExactOracle).unwrap();
                let lazy = greedy_select_with(&g, k, true, &ExactOracle).unwrap();
                assert_eq!(plain.seeds, lazy.seeds, "k = {k}");
            }
        }
    }

    #[test]
    fn marginal_gain_examples() {
        // isolated node of weight 3 gains exactly 3
        let g = WicGraph::from_weighted_edges(2, &[(0, 1, 0.0)], &[1.0, 3.0]).unwrap();
        let gain = marginal_gain(&g, &[], NodeId(1), 2_000, 1).unwrap();
        assert_eq!(gain, 3.0);

        // downstream node of a deterministic chain adds nothing once covered
        let chain = WicGraph::from_weighted_edges(2, &[(0, 1, 1.0)], &[1.0, 1.0]).unwrap();
        let gain = marginal_gain(&chain, &[NodeId(0)], NodeId(1), 2_000, 1).unwrap();
        assert!(gain <= 1.0);
        assert_eq!(gain, 0.0);

        // two-path graph from empty set reproduces sigma({u}) = 2.125
        let tp: WicGraph<f64> = WicGraph::from_weighted_edges(
            3,
            &[(0, 1, 0.5), (0, 2, 0.5), (2, 1, 0.5)],
            &[1.0; 3],
        )
        .unwrap();
        let gain = marginal_gain(&tp, &[], NodeId(0), 200_000, 5).unwrap();
        assert!((gain - 2.125).abs() < 0.02, "gain {gain}");
    }

    #[test]
    fn marginal_gain_rejects_members() {
        let g = hub_vs_heavy(1.0);
        let err = marginal_gain(&g, &[NodeId(0)], NodeId(0), 10, 0).unwrap_err();
        assert!(matches!(err, Error::AlreadySelected { node: 0 }));
    }
}
