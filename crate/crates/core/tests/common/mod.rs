//! Shared test support: seeded random-graph corpora and a brute-force
//! simple-path reachability oracle kept independent of the library's
//! iterative walk.
#![allow(dead_code)] // each test binary uses a different subset

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use wicmax_core::graph::{NodeId, WicGraph};

pub const PROB_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Random directed graph: up to `max_nodes` nodes (at least 2), up to
/// `max_edges` distinct non-loop edges, probabilities from the coarse grid,
/// integer weights in 1..=10.
pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, max_edges: usize) -> WicGraph<f64> {
    let n = rng.random_range(2..=max_nodes);
    let possible = n * (n - 1);
    let m = rng.random_range(0..=max_edges.min(possible));
    let mut edges: Vec<(u32, u32, f64)> = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    while edges.len() < m {
        let u = rng.random_range(0..n as u32);
        let v = rng.random_range(0..n as u32);
        if u == v || !seen.insert((u, v)) {
            continue;
        }
        let p = PROB_GRID[rng.random_range(0..PROB_GRID.len())];
        edges.push((u, v, p));
    }
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(1..=10) as f64).collect();
    WicGraph::from_weighted_edges(n, &edges, &weights).unwrap()
}

/// All simple-path products from `source`, folded per target with the
/// complement-product identity `a + q - a*q`. Recursive on purpose: a
/// different traversal and accumulation shape than the library walk.
pub fn brute_force_reach(g: &WicGraph<f64>, source: NodeId) -> Vec<(NodeId, f64)> {
    fn dfs(
        g: &WicGraph<f64>,
        node: NodeId,
        product: f64,
        on_path: &mut Vec<bool>,
        acc: &mut Vec<f64>,
    ) {
        for &(v, p) in g.out_edges(node) {
            if on_path[v.index()] || p == 0.0 {
                continue;
            }
            let q = product * p;
            acc[v.index()] = acc[v.index()] + q - acc[v.index()] * q;
            on_path[v.index()] = true;
            dfs(g, v, q, on_path, acc);
            on_path[v.index()] = false;
        }
    }
    let n = g.node_count();
    let mut on_path = vec![false; n];
    let mut acc = vec![0.0; n];
    on_path[source.index()] = true;
    dfs(g, source, 1.0, &mut on_path, &mut acc);
    (0..n as u32)
        .map(NodeId)
        .filter(|v| acc[v.index()] > 0.0)
        .map(|v| (v, acc[v.index()]))
        .collect()
}

/// Seeds of a subset bitmask.
pub fn mask_seeds(mask: usize) -> Vec<NodeId> {
    (0..usize::BITS as usize)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| NodeId(i as u32))
        .collect()
}
