//! Directed weighted-cascade graphs: loading from plain-text edge lists,
//! probability assignment (trivalency / constant / from file) and node-weight
//! assignment (uniform / random integer / from file).
//!
//! Node labels from the input file are remapped to dense ids in first-seen
//! order; the remap table is kept so results can be reported in the original
//! labels. Self-loops are dropped and duplicate ordered pairs collapse to a
//! single edge.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::master_rng;
use crate::scalar::Scalar;

/// Dense node index, `0 <= id < node_count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// How edge propagation probabilities are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbScheme<T> {
    /// Uniform choice from {0.001, 0.01, 0.1} per edge (weak / medium /
    /// strong connection).
    Trivalency,
    Constant(T),
    /// One `<u-label> <v-label> <p>` line per edge.
    FromFile(PathBuf),
}

/// How node weights are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightScheme<T> {
    /// Every node gets the same weight. `Uniform(1)` is the plain
    /// independent-cascade setting.
    Uniform(T),
    /// Uniform draw from {1, ..., max} per node.
    RandomInt(u32),
    /// One `<u-label> <w>` line per node.
    FromFile(PathBuf),
}

/// Probabilities drawn by [`ProbScheme::Trivalency`].
pub const TRIVALENCY_PROBS: [f64; 3] = [0.001, 0.01, 0.1];

/// Directed graph with a propagation probability per edge and a non-negative
/// weight per node. Forward and reverse adjacency are kept in sync; both are
/// sorted by neighbor id.
#[derive(Debug, Clone, PartialEq)]
pub struct WicGraph<T> {
    out_edges: Vec<Vec<(NodeId, T)>>,
    in_edges: Vec<Vec<(NodeId, T)>>,
    weights: Vec<T>,
    labels: Vec<u64>,
}

impl<T: Scalar> WicGraph<T> {
    /// Graph with `node_count` nodes labelled by their own index, no edges,
    /// all weights zero.
    pub fn new(node_count: usize) -> Self {
        WicGraph {
            out_edges: vec![Vec::new(); node_count],
            in_edges: vec![Vec::new(); node_count],
            weights: vec![T::zero(); node_count],
            labels: (0..node_count as u64).collect(),
        }
    }

    /// Build from dense-id edges with all probabilities zero and all weights
    /// zero. Rejects self-loops, duplicates and out-of-range ids.
    pub fn from_edges(node_count: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let probed: Vec<(u32, u32, T)> = edges.iter().map(|&(u, v)| (u, v, T::zero())).collect();
        Self::from_weighted_edges(node_count, &probed, &vec![T::zero(); node_count])
    }

    /// Build a fully parameterized graph from dense-id edges.
    pub fn from_weighted_edges(
        node_count: usize,
        edges: &[(u32, u32, T)],
        weights: &[T],
    ) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        if weights.len() != node_count {
            return Err(Error::InvalidParameter(format!(
                "{} weights for {} nodes",
                weights.len(),
                node_count
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= T::zero())) {
            return Err(Error::InvalidParameter(format!("negative weight {}", w)));
        }
        let mut g = WicGraph::new(node_count);
        g.weights.copy_from_slice(weights);
        let mut seen = std::collections::HashSet::new();
        for &(u, v, p) in edges {
            for id in [u, v] {
                if id as usize >= node_count {
                    return Err(Error::NodeOutOfRange {
                        node: id,
                        count: node_count,
                    });
                }
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at node {}", u)));
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge {} -> {}",
                    u, v
                )));
            }
            check_prob(p)?;
            g.out_edges[u as usize].push((NodeId(v), p));
            g.in_edges[v as usize].push((NodeId(u), p));
        }
        g.sort_adjacency();
        Ok(g)
    }

    fn sort_adjacency(&mut self) {
        for list in self.out_edges.iter_mut().chain(self.in_edges.iter_mut()) {
            list.sort_by_key(|&(n, _)| n);
        }
    }

    pub fn node_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_edges.iter().map(Vec::len).sum()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count() as u32).map(NodeId)
    }

    /// Outgoing `(target, probability)` pairs, ascending by target.
    pub fn out_edges(&self, u: NodeId) -> &[(NodeId, T)] {
        &self.out_edges[u.index()]
    }

    /// Incoming `(source, probability)` pairs, ascending by source.
    pub fn in_edges(&self, v: NodeId) -> &[(NodeId, T)] {
        &self.in_edges[v.index()]
    }

    pub fn weight(&self, u: NodeId) -> T {
        self.weights[u.index()]
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().copied().sum()
    }

    /// Original input label of a node.
    pub fn label(&self, u: NodeId) -> u64 {
        self.labels[u.index()]
    }

    pub fn contains(&self, u: NodeId) -> bool {
        u.index() < self.node_count()
    }

    pub fn check_node(&self, u: NodeId) -> Result<()> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: u.0,
                count: self.node_count(),
            })
        }
    }

    /// Load an unparameterized graph (all probabilities and weights zero)
    /// from a whitespace-delimited edge list. Lines starting with `#` are
    /// comments; blank lines are skipped. With `undirected`, each input edge
    /// yields both directions.
    pub fn load_edge_list(path: impl AsRef<Path>, undirected: bool) -> Result<Self> {
        let file = File::open(path.as_ref())?;
        Self::parse_edge_list(BufReader::new(file), undirected)
    }

    /// `load_edge_list` over any reader; used for in-memory fixtures.
    pub fn parse_edge_list(reader: impl BufRead, undirected: bool) -> Result<Self> {
        let mut labels: Vec<u64> = Vec::new();
        let mut by_label: HashMap<u64, u32> = HashMap::new();
        let mut intern = |label: u64, labels: &mut Vec<u64>| -> u32 {
            *by_label.entry(label).or_insert_with(|| {
                labels.push(label);
                (labels.len() - 1) as u32
            })
        };

        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (u, v) = parse_pair(line, lineno + 1)?;
            let u = intern(u, &mut labels);
            let v = intern(v, &mut labels);
            if u == v {
                continue; // self-loop dropped
            }
            if seen.insert((u, v)) {
                edges.push((u, v));
            }
            if undirected && seen.insert((v, u)) {
                edges.push((v, u));
            }
        }
        if labels.is_empty() {
            return Err(Error::EmptyGraph);
        }

        let node_count = labels.len();
        let mut g = WicGraph::new(node_count);
        g.labels = labels;
        for (u, v) in edges {
            g.out_edges[u as usize].push((NodeId(v), T::zero()));
            g.in_edges[v as usize].push((NodeId(u), T::zero()));
        }
        g.sort_adjacency();
        Ok(g)
    }

    /// Assign a propagation probability to every edge. Deterministic for a
    /// fixed seed: edges are visited in ascending `(source, target)` order
    /// and draws come from a seed-derived ChaCha8 stream.
    pub fn assign_probabilities(&mut self, scheme: &ProbScheme<T>, rng_seed: u64) -> Result<()> {
        match scheme {
            ProbScheme::Trivalency => {
                let mut rng = master_rng(rng_seed);
                let choices: [T; 3] = [
                    T::from_f64(TRIVALENCY_PROBS[0]).unwrap(),
                    T::from_f64(TRIVALENCY_PROBS[1]).unwrap(),
                    T::from_f64(TRIVALENCY_PROBS[2]).unwrap(),
                ];
                for list in self.out_edges.iter_mut() {
                    for (_, p) in list.iter_mut() {
                        *p = choices[rng.random_range(0..3usize)];
                    }
                }
            }
            ProbScheme::Constant(p) => {
                check_prob(*p)?;
                for list in self.out_edges.iter_mut() {
                    for (_, slot) in list.iter_mut() {
                        *slot = *p;
                    }
                }
            }
            ProbScheme::FromFile(path) => {
                let table = read_prob_file::<T>(path)?;
                for u in 0..self.out_edges.len() {
                    let lu = self.labels[u];
                    for (v, slot) in self.out_edges[u].iter_mut() {
                        let lv = self.labels[v.index()];
                        match table.get(&(lu, lv)) {
                            Some(&p) => *slot = p,
                            None => return Err(Error::MissingEdgeProbability { u: lu, v: lv }),
                        }
                    }
                }
            }
        }
        self.rebuild_reverse();
        Ok(())
    }

    /// Assign a weight to every node. Deterministic for a fixed seed: nodes
    /// are visited in ascending id order.
    pub fn assign_weights(&mut self, scheme: &WeightScheme<T>, rng_seed: u64) -> Result<()> {
        match scheme {
            WeightScheme::Uniform(w) => {
                if !(*w >= T::zero()) {
                    return Err(Error::InvalidParameter(format!("negative weight {}", w)));
                }
                self.weights.fill(*w);
            }
            WeightScheme::RandomInt(max) => {
                if *max == 0 {
                    return Err(Error::InvalidParameter("RandomInt max must be >= 1".into()));
                }
                let mut rng = master_rng(rng_seed);
                for w in self.weights.iter_mut() {
                    *w = T::from_u32(rng.random_range(1..=*max)).unwrap();
                }
            }
            WeightScheme::FromFile(path) => {
                let table = read_weight_file::<T>(path)?;
                for u in 0..self.weights.len() {
                    let label = self.labels[u];
                    match table.get(&label) {
                        Some(&w) => self.weights[u] = w,
                        None => return Err(Error::MissingNodeWeight { label }),
                    }
                }
            }
        }
        Ok(())
    }

    fn rebuild_reverse(&mut self) {
        for list in self.in_edges.iter_mut() {
            list.clear();
        }
        for u in 0..self.out_edges.len() {
            for &(v, p) in &self.out_edges[u] {
                self.in_edges[v.index()].push((NodeId(u as u32), p));
            }
        }
        for list in self.in_edges.iter_mut() {
            list.sort_by_key(|&(n, _)| n);
        }
    }

    /// Check the structural invariants: probabilities in [0,1], weights
    /// non-negative, no self-loops or duplicate pairs, and reverse adjacency
    /// the exact transpose of forward adjacency.
    pub fn validate(&self) -> Result<()> {
        let mut transpose: Vec<Vec<(NodeId, T)>> = vec![Vec::new(); self.node_count()];
        for u in 0..self.out_edges.len() {
            let mut prev: Option<NodeId> = None;
            for &(v, p) in &self.out_edges[u] {
                check_prob(p)?;
                if v.index() == u {
                    return Err(Error::InvalidParameter(format!("self-loop at node {}", u)));
                }
                if prev == Some(v) {
                    return Err(Error::InvalidParameter(format!(
                        "duplicate edge {} -> {}",
                        u, v
                    )));
                }
                prev = Some(v);
                transpose[v.index()].push((NodeId(u as u32), p));
            }
        }
        if transpose != self.in_edges {
            return Err(Error::InvalidParameter(
                "reverse adjacency is not the transpose of forward adjacency".into(),
            ));
        }
        if let Some(w) = self.weights.iter().find(|w| !(**w >= T::zero())) {
            return Err(Error::InvalidParameter(format!("negative weight {}", w)));
        }
        Ok(())
    }

    /// Stable fingerprint of structure and parameters (FNV-1a over node
    /// count, edges and weights); keys the on-disk reachability cache.
    pub fn structural_hash(&self) -> u64 {
        let mut h = Fnv::new();
        h.write_u64(self.node_count() as u64);
        for u in 0..self.out_edges.len() {
            for &(v, p) in &self.out_edges[u] {
                h.write_u64(u as u64);
                h.write_u64(v.0 as u64);
                h.write_u64(p.to_f64().unwrap().to_bits());
            }
        }
        for w in &self.weights {
            h.write_u64(w.to_f64().unwrap().to_bits());
        }
        h.finish()
    }
}

fn check_prob<T: Scalar>(p: T) -> Result<()> {
    if p >= T::zero() && p <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "probability {} outside [0, 1]",
            p
        )))
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(u64, u64)> {
    let mut it = line.split_whitespace();
    let u = parse_label(it.next(), line, lineno)?;
    let v = parse_label(it.next(), line, lineno)?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("expected two tokens, got more: {:?}", line),
        });
    }
    Ok((u, v))
}

fn parse_label(tok: Option<&str>, line: &str, lineno: usize) -> Result<u64> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line: lineno,
        msg: format!("expected two tokens: {:?}", line),
    })?;
    tok.parse::<u64>().map_err(|_| Error::Parse {
        line: lineno,
        msg: format!("non-integer node label {:?}", tok),
    })
}

/// `<u-label> <v-label> <p>` per line; first occurrence of a pair wins.
fn read_prob_file<T: Scalar>(path: &Path) -> Result<HashMap<(u64, u64), T>> {
    let reader = BufReader::new(File::open(path)?);
    let mut table = HashMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: format!("expected \"u v p\", got {:?}", line),
            });
        }
        let u = parse_label(Some(toks[0]), line, lineno + 1)?;
        let v = parse_label(Some(toks[1]), line, lineno + 1)?;
        let p: f64 = toks[2].parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            msg: format!("non-numeric probability {:?}", toks[2]),
        })?;
        let p = T::from_f64(p).unwrap();
        check_prob(p).map_err(|_| Error::Parse {
            line: lineno + 1,
            msg: format!("probability {} outside [0, 1]", p),
        })?;
        table.entry((u, v)).or_insert(p);
    }
    Ok(table)
}

/// `<u-label> <w>` per line; first occurrence of a label wins.
fn read_weight_file<T: Scalar>(path: &Path) -> Result<HashMap<u64, T>> {
    let reader = BufReader::new(File::open(path)?);
    let mut table = HashMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: format!("expected \"u w\", got {:?}", line),
            });
        }
        let u = parse_label(Some(toks[0]), line, lineno + 1)?;
        let w: f64 = toks[1].parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            msg: format!("non-numeric weight {:?}", toks[1]),
        })?;
        if !(w >= 0.0) {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: format!("negative weight {}", w),
            });
        }
        table.entry(u).or_insert(T::from_f64(w).unwrap());
    }
    Ok(table)
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
    fn write_u64(&mut self, x: u64) {
        for b in x.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x100_0000_01b3);
        }
    }
    fn finish(&self) -> u64 {
        self.0
    }
}
