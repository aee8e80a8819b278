//! Comparison selectors: PageRank over the propagation-probability
//! transition matrix (with an optional weighted-votes variant) and uniform
//! random selection.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, WicGraph};
use crate::result::SeedResult;
use crate::rng::master_rng;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig<T> {
    pub damping: T,
    pub max_iters: usize,
    /// L1 difference between successive score vectors that counts as
    /// converged.
    pub tolerance: T,
    /// Weighted-votes variant: initial scores and teleport mass proportional
    /// to node weights instead of uniform. Transition probabilities are
    /// unchanged.
    pub weighted_votes: bool,
}

impl<T: Scalar> Default for PageRankConfig<T> {
    fn default() -> Self {
        PageRankConfig {
            damping: T::from_f64(0.85).unwrap(),
            max_iters: 10_000,
            tolerance: T::from_f64(0.001).unwrap(),
            weighted_votes: false,
        }
    }
}

/// Power iteration with transition probability `p(u,v) / sum_i p(u,v_i)`
/// along out-edges. Nodes with zero outgoing probability mass are dangling
/// and redistribute their score through the teleport vector. Stops when the
/// L1 delta drops below the tolerance or the iteration cap is reached.
pub fn pagerank_scores<T: Scalar>(g: &WicGraph<T>, cfg: &PageRankConfig<T>) -> Result<Vec<T>> {
    if !(cfg.damping > T::zero() && cfg.damping < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "damping {} outside (0, 1)",
            cfg.damping
        )));
    }
    if !(cfg.tolerance > T::zero()) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let n = g.node_count();
    let teleport: Vec<T> = if cfg.weighted_votes {
        let total = g.total_weight();
        if !(total > T::zero()) {
            return Err(Error::InvalidParameter(
                "weighted votes need a positive total weight".into(),
            ));
        }
        g.weights().iter().map(|&w| w / total).collect()
    } else {
        vec![T::one() / T::from_usize(n).unwrap(); n]
    };
    let out_mass: Vec<T> = (0..n)
        .map(|u| {
            g.out_edges(NodeId(u as u32))
                .iter()
                .map(|&(_, p)| p)
                .sum::<T>()
        })
        .collect();

    let mut scores = teleport.clone();
    let mut next = vec![T::zero(); n];
    for _ in 0..cfg.max_iters {
        let dangling: T = (0..n)
            .filter(|&u| out_mass[u] == T::zero())
            .map(|u| scores[u])
            .sum();
        next.par_iter_mut().enumerate().for_each(|(v, slot)| {
            let mut in_flow = T::zero();
            for &(u, p) in g.in_edges(NodeId(v as u32)) {
                if out_mass[u.index()] > T::zero() {
                    in_flow += scores[u.index()] * p / out_mass[u.index()];
                }
            }
            *slot = (T::one() - cfg.damping) * teleport[v]
                + cfg.damping * (in_flow + dangling * teleport[v]);
        });
        let delta: T = scores
            .iter()
            .zip(next.iter())
            .map(|(a, b)| (*a - *b).abs())
            .sum();
        std::mem::swap(&mut scores, &mut next);
        if delta < cfg.tolerance {
            break;
        }
    }
    Ok(scores)
}

/// Top-k nodes by PageRank score, ties to the smaller id.
pub fn pagerank_select<T: Scalar>(
    g: &WicGraph<T>,
    k: usize,
    cfg: &PageRankConfig<T>,
) -> Result<SeedResult<T>> {
    if k > g.node_count() {
        return Err(Error::KTooLarge {
            k,
            count: g.node_count(),
        });
    }
    let start = Instant::now();
    let scores = pagerank_scores(g, cfg)?;
    let mut order: Vec<u32> = (0..g.node_count() as u32).collect();
    order.sort_by(|&a, &b| {
        scores[b as usize]
            .partial_cmp(&scores[a as usize])
            .expect("finite scores")
            .then_with(|| a.cmp(&b))
    });
    let mut result = SeedResult::new();
    for &u in order.iter().take(k) {
        result.seeds.push(NodeId(u));
        result.step_scores.push(scores[u as usize]);
        result.step_times.push(start.elapsed());
    }
    result.total_time = start.elapsed();
    Ok(result)
}

/// k distinct uniform nodes via a partial Fisher-Yates shuffle of the id
/// range; the first j selections are a prefix of any longer run with the
/// same seed.
pub fn random_select<T: Scalar>(g: &WicGraph<T>, k: usize, rng_seed: u64) -> Result<SeedResult<T>> {
    let n = g.node_count();
    if k > n {
        return Err(Error::KTooLarge { k, count: n });
    }
    let start = Instant::now();
    let mut rng = master_rng(rng_seed);
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut result = SeedResult::new();
    for i in 0..k {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
        result.seeds.push(NodeId(pool[i]));
        result.step_scores.push(T::one());
        result.step_times.push(start.elapsed());
    }
    result.total_time = start.elapsed();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WicGraph;

    #[test]
    fn symmetric_cycle_splits_scores_evenly() {
        let g: WicGraph<f64> =
            WicGraph::from_weighted_edges(2, &[(0, 1, 0.5), (1, 0, 0.5)], &[1.0, 1.0]).unwrap();
        let scores = pagerank_scores(&g, &PageRankConfig::default()).unwrap();
        assert!((scores[0] - 0.5).abs() < 1e-9);
        assert!((scores[1] - 0.5).abs() < 1e-9);
        let res = pagerank_select(&g, 1, &PageRankConfig::default()).unwrap();
        assert_eq!(res.seeds, vec![NodeId(0)]); // tie to the smaller id
    }

    #[test]
    fn weighted_votes_rank_heavy_dangling_nodes_first() {
        let g = WicGraph::from_weighted_edges(2, &[], &[10.0, 1.0]).unwrap();
        let cfg = PageRankConfig {
            weighted_votes: true,
            ..PageRankConfig::default()
        };
        let scores = pagerank_scores(&g, &cfg).unwrap();
        assert!(scores[0] > scores[1]);
        let res = pagerank_select(&g, 1, &cfg).unwrap();
        assert_eq!(res.seeds, vec![NodeId(0)]);
    }

    #[test]
    fn inbound_star_center_scores_highest() {
        let g = WicGraph::from_weighted_edges(
            4,
            &[(1, 0, 0.5), (2, 0, 0.5), (3, 0, 0.5)],
            &[1.0; 4],
        )
        .unwrap();
        let scores = pagerank_scores(&g, &PageRankConfig::default()).unwrap();
        for v in 1..4 {
            assert!(scores[0] > scores[v]);
        }
    }

    #[test]
    fn scores_sum_to_one() {
        let g = WicGraph::from_weighted_edges(
            5,
            &[(0, 1, 0.9), (1, 2, 0.1), (2, 0, 0.5), (3, 2, 0.7)],
            &[1.0, 2.0, 3.0, 4.0, 5.0],
        )
        .unwrap();
        for weighted_votes in [false, true] {
            let cfg = PageRankConfig {
                weighted_votes,
                tolerance: 1e-10,
                ..PageRankConfig::default()
            };
            let scores = pagerank_scores(&g, &cfg).unwrap();
            let total: f64 = scores.iter().sum();
            assert!((total - 1.0).abs() < 1e-9, "sum {total}");
        }
    }

    #[test]
    fn unit_weights_make_both_variants_identical() {
        let g: WicGraph<f64> = WicGraph::from_weighted_edges(
            4,
            &[(0, 1, 0.3), (1, 2, 0.6), (2, 3, 0.2), (3, 0, 0.9)],
            &[1.0; 4],
        )
        .unwrap();
        let plain = pagerank_scores(&g, &PageRankConfig::default()).unwrap();
        let cfg = PageRankConfig {
            weighted_votes: true,
            ..PageRankConfig::default()
        };
        let weighted = pagerank_scores(&g, &cfg).unwrap();
        for (a, b) in plain.iter().zip(weighted.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn convergence_on_a_strongly_connected_graph() {
        let g = WicGraph::from_weighted_edges(
            3,
            &[(0, 1, 0.5), (1, 2, 0.5), (2, 0, 0.5)],
            &[1.0; 3],
        )
        .unwrap();
        let cfg = PageRankConfig::<f64>::default();
        let a = pagerank_scores(&g, &cfg).unwrap();
        // one more hand iteration moves scores by less than the tolerance
        let again = pagerank_scores(
            &g,
            &PageRankConfig {
                tolerance: 1e-12,
                max_iters: 1_000_000,
                ..cfg
            },
        )
        .unwrap();
        let delta: f64 = a.iter().zip(again.iter()).map(|(x, y)| (x - y).abs()).sum();
        assert!(delta < cfg.tolerance, "delta {delta}");
    }

    #[test]
    fn random_selection_is_deterministic_and_prefix_stable() {
        let g = WicGraph::from_weighted_edges(6, &[(0, 1, 0.5)], &[1.0; 6]).unwrap();
        let a = random_select(&g, 3, 99).unwrap();
        let b = random_select(&g, 3, 99).unwrap();
        assert_eq!(a.seeds, b.seeds);
        let longer = random_select(&g, 5, 99).unwrap();
        assert_eq!(&longer.seeds[..3], &a.seeds[..]);

        let all = random_select(&g, 6, 7).unwrap();
        let mut sorted = all.seeds.clone();
        sorted.sort();
        assert_eq!(sorted, (0..6).map(NodeId).collect::<Vec<_>>());

        let single = WicGraph::from_weighted_edges(1, &[], &[1.0]).unwrap();
        assert_eq!(random_select(&single, 1, 0).unwrap().seeds, vec![NodeId(0)]);
    }

    #[test]
    fn random_rejects_oversized_k() {
        let g = WicGraph::from_weighted_edges(2, &[(0, 1, 0.5)], &[1.0; 2]).unwrap();
        assert!(matches!(
            random_select(&g, 3, 0).unwrap_err(),
            Error::KTooLarge { k: 3, count: 2 }
        ));
    }
}
