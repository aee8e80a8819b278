//! Ground-truth diffusion: single random cascades, Monte Carlo estimation of
//! the expected spread value, and an exact live-edge enumeration oracle for
//! tiny graphs.
//!
//! A cascade activates the seeds at the first timestamp; every newly
//! activated node then attempts each outgoing edge once on its still-inactive
//! target, and the process halts the first round nothing new activates. The
//! value of an outcome is the total weight of activated nodes (seeds
//! included), so with all weights 1 it is the activated count.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, WicGraph};
use crate::rng::stream_rng;
use crate::scalar::Scalar;

/// Most edges `exact_sigma` will enumerate (2^m live-edge subgraphs).
pub const EXACT_EDGE_LIMIT: usize = 25;

/// One realized cascade.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeOutcome<T> {
    /// Activated nodes (seeds included), ascending.
    pub activated: Vec<NodeId>,
    /// Total weight of the activated nodes.
    pub value: T,
}

/// Monte Carlo estimate of the spread value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadEstimate<T> {
    pub mean: T,
    pub std_error: T,
    pub repetitions: usize,
}

/// Spread estimate plus the mean activated-node count, for reports that show
/// both the value and the population reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadStats<T> {
    pub value: SpreadEstimate<T>,
    pub activated_mean: f64,
}

/// Reusable per-thread buffers so repeated cascades allocate nothing.
struct Scratch {
    stamp: Vec<u32>,
    epoch: u32,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            stamp: vec![0; n],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    #[inline]
    fn begin(&mut self) {
        self.epoch += 1;
        if self.epoch == u32::MAX {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        self.frontier.clear();
        self.next.clear();
    }

    #[inline]
    fn active(&self, v: u32) -> bool {
        self.stamp[v as usize] == self.epoch
    }

    #[inline]
    fn activate(&mut self, v: u32) {
        self.stamp[v as usize] = self.epoch;
    }
}

/// One cascade; returns `(total weight, activated count)`. Activation order
/// within a round is ascending by node id so a fixed RNG stream reproduces
/// the run bit-exactly.
fn cascade_into<T: Scalar>(
    g: &WicGraph<T>,
    seeds: &[NodeId],
    scratch: &mut Scratch,
    rng: &mut impl Rng,
) -> (T, usize) {
    scratch.begin();
    let mut value = T::zero();
    let mut count = 0usize;
    for &s in seeds {
        if !scratch.active(s.0) {
            scratch.activate(s.0);
            scratch.frontier.push(s.0);
            value += g.weight(s);
            count += 1;
        }
    }
    scratch.frontier.sort_unstable();
    while !scratch.frontier.is_empty() {
        scratch.next.clear();
        for i in 0..scratch.frontier.len() {
            let u = scratch.frontier[i];
            for &(v, p) in g.out_edges(NodeId(u)) {
                if scratch.active(v.0) {
                    continue;
                }
                if rng.random::<f64>() < p.to_f64().unwrap() {
                    scratch.activate(v.0);
                    scratch.next.push(v.0);
                    value += g.weight(v);
                    count += 1;
                }
            }
        }
        scratch.next.sort_unstable();
        std::mem::swap(&mut scratch.frontier, &mut scratch.next);
    }
    (value, count)
}

fn check_seeds<T: Scalar>(g: &WicGraph<T>, seeds: &[NodeId]) -> Result<()> {
    for &s in seeds {
        g.check_node(s)?;
    }
    Ok(())
}

/// Run a single cascade from `seeds` with the supplied generator.
pub fn run_cascade<T: Scalar>(
    g: &WicGraph<T>,
    seeds: &[NodeId],
    rng: &mut impl Rng,
) -> Result<CascadeOutcome<T>> {
    check_seeds(g, seeds)?;
    let mut scratch = Scratch::new(g.node_count());
    let (value, _) = cascade_into(g, seeds, &mut scratch, rng);
    let mut activated: Vec<NodeId> = (0..g.node_count() as u32)
        .filter(|&v| scratch.active(v))
        .map(NodeId)
        .collect();
    activated.sort_unstable();
    Ok(CascadeOutcome { activated, value })
}

/// Monte Carlo estimate of sigma over `reps` independent cascades.
/// Repetition `i` draws from stream `i` of the seed's generator, so the
/// result is identical whether repetitions run sequentially or on a worker
/// pool.
pub fn estimate_sigma<T: Scalar>(
    g: &WicGraph<T>,
    seeds: &[NodeId],
    reps: usize,
    rng_seed: u64,
) -> Result<SpreadEstimate<T>> {
    Ok(estimate_sigma_stats(g, seeds, reps, rng_seed)?.value)
}

/// As [`estimate_sigma`], also reporting the mean activated count.
pub fn estimate_sigma_stats<T: Scalar>(
    g: &WicGraph<T>,
    seeds: &[NodeId],
    reps: usize,
    rng_seed: u64,
) -> Result<SpreadStats<T>> {
    if reps == 0 {
        return Err(Error::InvalidParameter("repetitions must be >= 1".into()));
    }
    check_seeds(g, seeds)?;
    let n = g.node_count();
    let samples: Vec<(f64, usize)> = (0..reps)
        .into_par_iter()
        .map_init(
            || Scratch::new(n),
            |scratch, rep| {
                let mut rng = stream_rng(rng_seed, rep as u64);
                let (value, count) = cascade_into(g, seeds, scratch, &mut rng);
                (value.to_f64().unwrap(), count)
            },
        )
        .collect();

    let r = reps as f64;
    let mean = samples.iter().map(|&(v, _)| v).sum::<f64>() / r;
    let var = if reps > 1 {
        samples.iter().map(|&(v, _)| (v - mean) * (v - mean)).sum::<f64>() / (r - 1.0)
    } else {
        0.0
    };
    let activated_mean = samples.iter().map(|&(_, c)| c as f64).sum::<f64>() / r;
    Ok(SpreadStats {
        value: SpreadEstimate {
            mean: T::from_f64(mean).unwrap(),
            std_error: T::from_f64((var / r).sqrt()).unwrap(),
            repetitions: reps,
        },
        activated_mean,
    })
}

/// Exact expected spread value by enumerating every live-edge subgraph.
/// Refuses graphs with more than [`EXACT_EDGE_LIMIT`] edges.
pub fn exact_sigma<T: Scalar>(g: &WicGraph<T>, seeds: &[NodeId]) -> Result<T> {
    check_seeds(g, seeds)?;
    let enu = Enumerator::new(g)?;
    let mut total = 0.0;
    enu.for_each_subgraph(|prob, live| {
        total += prob * enu.reach_weight(seeds, live);
    });
    Ok(T::from_f64(total).unwrap())
}

/// Exact sigma for every subset of nodes at once, indexed by subset bitmask.
/// Only practical for very small graphs; used to cross-check monotonicity,
/// submodularity and exhaustive optima.
pub fn exact_sigma_subsets<T: Scalar>(g: &WicGraph<T>) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n > 16 {
        return Err(Error::InvalidParameter(format!(
            "subset enumeration supports at most 16 nodes, graph has {}",
            n
        )));
    }
    let enu = Enumerator::new(g)?;
    let full = 1usize << n;
    // Weight of each node subset.
    let mut wsum = vec![0.0f64; full];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        wsum[mask] = wsum[mask & (mask - 1)] + g.weight(NodeId(low as u32)).to_f64().unwrap();
    }
    let mut sigma = vec![0.0f64; full];
    let mut reach = vec![0usize; n];
    let mut union_dp = vec![0usize; full];
    enu.for_each_subgraph(|prob, live| {
        for (s, slot) in reach.iter_mut().enumerate() {
            *slot = enu.reach_mask(NodeId(s as u32), live);
        }
        // union_dp[mask] = nodes reachable from the seed set `mask`.
        for mask in 1..full {
            let low = mask.trailing_zeros() as usize;
            union_dp[mask] = union_dp[mask & (mask - 1)] | reach[low];
        }
        for mask in 1..full {
            sigma[mask] += prob * wsum[union_dp[mask]];
        }
    });
    Ok(sigma)
}

/// Shared live-edge enumeration machinery.
struct Enumerator<'g, T> {
    g: &'g WicGraph<T>,
    // (source, target, probability as f64) for edges with 0 < p < 1
    free_edges: Vec<(u32, u32, f64)>,
    // adjacency of always-on (p == 1) edges
    sure: Vec<Vec<u32>>,
    // adjacency of free edges: (bit index, target)
    free_adj: Vec<Vec<(usize, u32)>>,
}

impl<'g, T: Scalar> Enumerator<'g, T> {
    fn new(g: &'g WicGraph<T>) -> Result<Self> {
        let m = g.edge_count();
        if m > EXACT_EDGE_LIMIT {
            return Err(Error::TooManyEdges {
                edges: m,
                limit: EXACT_EDGE_LIMIT,
            });
        }
        let n = g.node_count();
        let mut free_edges = Vec::new();
        let mut sure = vec![Vec::new(); n];
        let mut free_adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
        for u in g.nodes() {
            for &(v, p) in g.out_edges(u) {
                let p = p.to_f64().unwrap();
                if p >= 1.0 {
                    sure[u.index()].push(v.0);
                } else if p > 0.0 {
                    free_adj[u.index()].push((free_edges.len(), v.0));
                    free_edges.push((u.0, v.0, p));
                }
            }
        }
        Ok(Enumerator {
            g,
            free_edges,
            sure,
            free_adj,
        })
    }

    /// Invoke `f(probability, live_mask)` for every subset of the free edges.
    fn for_each_subgraph(&self, mut f: impl FnMut(f64, u32)) {
        let bits = self.free_edges.len();
        for live in 0u32..(1u32 << bits) {
            let mut prob = 1.0;
            for (i, &(_, _, p)) in self.free_edges.iter().enumerate() {
                prob *= if live & (1 << i) != 0 { p } else { 1.0 - p };
            }
            f(prob, live);
        }
    }

    /// Nodes reachable from `source` in the realization, as a bitmask
    /// (node_count <= 16 contexts only).
    fn reach_mask(&self, source: NodeId, live: u32) -> usize {
        let mut mask = 0usize;
        let mut stack = vec![source.0];
        mask |= 1 << source.index();
        while let Some(u) = stack.pop() {
            for &v in &self.sure[u as usize] {
                if mask & (1 << v) == 0 {
                    mask |= 1 << v;
                    stack.push(v);
                }
            }
            for &(bit, v) in &self.free_adj[u as usize] {
                if live & (1 << bit) != 0 && mask & (1 << v) == 0 {
                    mask |= 1 << v;
                    stack.push(v);
                }
            }
        }
        mask
    }

    /// Total weight reachable from `seeds` in the realization. Works for any
    /// node count.
    fn reach_weight(&self, seeds: &[NodeId], live: u32) -> f64 {
        let n = self.g.node_count();
        let mut seen = vec![false; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut total = 0.0;
        for &s in seeds {
            if !seen[s.index()] {
                seen[s.index()] = true;
                stack.push(s.0);
                total += self.g.weight(s).to_f64().unwrap();
            }
        }
        while let Some(u) = stack.pop() {
            for &v in &self.sure[u as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    total += self.g.weight(NodeId(v)).to_f64().unwrap();
                    stack.push(v);
                }
            }
            for &(bit, v) in &self.free_adj[u as usize] {
                if live & (1 << bit) != 0 && !seen[v as usize] {
                    seen[v as usize] = true;
                    total += self.g.weight(NodeId(v)).to_f64().unwrap();
                    stack.push(v);
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WicGraph;
    use crate::rng::master_rng;

    /// u -> v (0.5), u -> w (0.5), w -> v (0.5), unit weights.
    /// sigma({u}) = 1 + P(v) + P(w) = 1 + (1 - 0.5*0.75) + 0.5 = 2.125.
    fn two_path() -> WicGraph<f64> {
        WicGraph::from_weighted_edges(
            3,
            &[(0, 1, 0.5), (0, 2, 0.5), (2, 1, 0.5)],
            &[1.0, 1.0, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn empty_seed_set_spreads_nothing() {
        let g = two_path();
        let out = run_cascade(&g, &[], &mut master_rng(0)).unwrap();
        assert!(out.activated.is_empty());
        assert_eq!(out.value, 0.0);
        let est = estimate_sigma(&g, &[], 100, 0).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn isolated_node_keeps_its_weight() {
        let g = WicGraph::from_weighted_edges(2, &[(1, 0, 0.3)], &[1.0, 7.0]).unwrap();
        let out = run_cascade(&g, &[NodeId(1)], &mut master_rng(0)).unwrap();
        assert!(out.value >= 7.0);
        let g2 = WicGraph::from_weighted_edges(2, &[(0, 1, 0.0)], &[1.0, 7.0]).unwrap();
        let out2 = run_cascade(&g2, &[NodeId(1)], &mut master_rng(0)).unwrap();
        assert_eq!(out2.value, 7.0);
        assert_eq!(out2.activated, vec![NodeId(1)]);
    }

    #[test]
    fn deterministic_chain_activates_fully() {
        let g = WicGraph::from_weighted_edges(2, &[(0, 1, 1.0)], &[1.0, 1.0]).unwrap();
        let out = run_cascade(&g, &[NodeId(0)], &mut master_rng(0)).unwrap();
        assert_eq!(out.activated, vec![NodeId(0), NodeId(1)]);
        assert_eq!(out.value, 2.0);
    }

    #[test]
    fn seed_out_of_range_is_an_error() {
        let g = two_path();
        let err = run_cascade(&g, &[NodeId(9)], &mut master_rng(0)).unwrap_err();
        assert!(matches!(err, Error::NodeOutOfRange { node: 9, count: 3 }));
    }

    #[test]
    fn unit_weights_value_equals_activated_count() {
        let g = two_path();
        for seed in 0..20 {
            let out = run_cascade(&g, &[NodeId(0)], &mut master_rng(seed)).unwrap();
            assert_eq!(out.value, out.activated.len() as f64);
        }
    }

    #[test]
    fn star_estimate_approaches_closed_form() {
        // u -> a (0.5), u -> b (0.5): sigma({u}) = 2.0.
        let g: WicGraph<f64> =
            WicGraph::from_weighted_edges(3, &[(0, 1, 0.5), (0, 2, 0.5)], &[1.0; 3]).unwrap();
        let est = estimate_sigma(&g, &[NodeId(0)], 100_000, 11).unwrap();
        assert!(
            (est.mean - 2.0).abs() <= 3.0 * est.std_error.max(1e-6),
            "mean {} stderr {}",
            est.mean,
            est.std_error
        );
    }

    #[test]
    fn two_path_estimate_matches_enumeration() {
        let g = two_path();
        let exact = exact_sigma(&g, &[NodeId(0)]).unwrap();
        assert!((exact - 2.125).abs() < 1e-12);
        let est = estimate_sigma(&g, &[NodeId(0)], 200_000, 23).unwrap();
        assert!(
            (est.mean - exact).abs() <= 4.0 * est.std_error,
            "mean {} exact {} stderr {}",
            est.mean,
            exact,
            est.std_error
        );
    }

    #[test]
    fn estimate_is_deterministic_per_seed() {
        let g = two_path();
        let a = estimate_sigma(&g, &[NodeId(0)], 5_000, 17).unwrap();
        let b = estimate_sigma(&g, &[NodeId(0)], 5_000, 17).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exact_sigma_zero_probs_sums_seed_weights() {
        let g =
            WicGraph::from_weighted_edges(3, &[(0, 1, 0.0), (1, 2, 0.0)], &[2.0, 3.0, 4.0]).unwrap();
        let v = exact_sigma(&g, &[NodeId(0), NodeId(2)]).unwrap();
        assert_eq!(v, 6.0);
    }

    #[test]
    fn exact_sigma_sure_edges_count_reachable() {
        let g = WicGraph::from_weighted_edges(
            4,
            &[(0, 1, 1.0), (1, 2, 1.0), (3, 0, 1.0)],
            &[1.0; 4],
        )
        .unwrap();
        assert_eq!(exact_sigma(&g, &[NodeId(0)]).unwrap(), 3.0);
        assert_eq!(exact_sigma(&g, &[NodeId(3)]).unwrap(), 4.0);
    }

    #[test]
    fn exact_sigma_refuses_large_graphs() {
        let edges: Vec<(u32, u32, f64)> = (0..26).map(|i| (i, i + 1, 0.5)).collect();
        let g = WicGraph::from_weighted_edges(27, &edges, &vec![1.0; 27]).unwrap();
        let err = exact_sigma(&g, &[NodeId(0)]).unwrap_err();
        assert!(matches!(err, Error::TooManyEdges { edges: 26, limit: 25 }));
    }

    #[test]
    fn subset_table_matches_single_calls() {
        let g = two_path();
        let table = exact_sigma_subsets(&g).unwrap();
        for (mask, &tabled) in table.iter().enumerate() {
            let seeds: Vec<NodeId> = (0..3)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| NodeId(i as u32))
                .collect();
            let direct = exact_sigma(&g, &seeds).unwrap();
            assert!(
                (tabled - direct).abs() < 1e-12,
                "mask {mask}: {tabled} vs {direct}"
            );
        }
    }

    #[test]
    fn weight_scaling_scales_sigma_linearly() {
        let g = two_path();
        let scaled = WicGraph::from_weighted_edges(
            3,
            &[(0, 1, 0.5), (0, 2, 0.5), (2, 1, 0.5)],
            &[3.0, 3.0, 3.0],
        )
        .unwrap();
        let a = exact_sigma(&g, &[NodeId(0)]).unwrap();
        let b = exact_sigma(&scaled, &[NodeId(0)]).unwrap();
        assert!((b - 3.0 * a).abs() < 1e-12);
    }
}
