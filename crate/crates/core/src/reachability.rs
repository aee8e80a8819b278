//! Pre-treatment: per-pair reachability probabilities accumulated over
//! simple paths, the theta-bounded variant that prunes low-probability
//! branches, and the per-node tree views derived from the store.
//!
//! For a source u, a depth-first walk enumerates simple paths; arriving at v
//! along a path with product q folds into the running estimate as
//! `p_r(u,v) <- 1 - (1 - p_r(u,v)) * (1 - q)`. Paths sharing edges are not
//! independent, so the combined value is an estimate of the true activation
//! probability, not an exact one; it is exact when every target has at most
//! one path from the source.
//!
//! The walk is an explicit stack, not recursion: road networks have
//! diameters in the hundreds and would overflow a call stack.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, WicGraph};
use crate::scalar::Scalar;

/// Sparse map of accumulated reachability probabilities. Forward lists hold
/// each source's targets; reverse lists are the exact transpose. Only
/// entries with `p_r > theta` exist (theta = 0 for the unbounded store).
#[derive(Debug, Clone, PartialEq)]
pub struct ReachStore<T> {
    forward: Vec<Vec<(NodeId, T)>>,
    reverse: Vec<Vec<(NodeId, T)>>,
    theta: T,
}

/// Which per-node view a tree materializes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    /// Successors of the root with p_r(root, v); value sums p_r * w_v.
    InfluenceValue,
    /// Predecessors of the root with p_r(v, root); value sums p_r * w_root.
    WeightDiscount,
    /// As `InfluenceValue`, from a theta-bounded store.
    BoundedInfluenceValue,
    /// As `WeightDiscount`, from a theta-bounded store.
    BoundedWeightDiscount,
}

/// A root plus its (node, p_r) entries and the derived node value. No
/// parent/child topology is kept; only the probabilities matter downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceTree<T> {
    pub root: NodeId,
    pub kind: TreeKind,
    pub entries: Vec<(NodeId, T)>,
    pub value: T,
}

/// All-pairs reachability for one source: depth-first over simple paths,
/// pruning a branch before descending whenever the extended path product
/// would not exceed `theta`. `theta = 0` enumerates every simple path with a
/// positive product.
///
/// `budget`, when set, caps the number of path extensions; exceeding it is
/// an error rather than a truncated (silently wrong) result.
pub fn gen_pr_budgeted<T: Scalar>(
    g: &WicGraph<T>,
    source: NodeId,
    theta: T,
    budget: Option<u64>,
) -> Result<Vec<(NodeId, T)>> {
    g.check_node(source)?;
    check_theta(theta)?;
    let n = g.node_count();
    let mut acc: Vec<T> = vec![T::zero(); n];
    let mut touched: Vec<u32> = Vec::new();
    let mut on_path = vec![false; n];
    // (node, next out-edge index, product along the current path)
    let mut stack: Vec<(u32, usize, T)> = vec![(source.0, 0, T::one())];
    on_path[source.index()] = true;
    let mut steps: u64 = 0;

    while let Some(top) = stack.last_mut() {
        let (node, path_prob) = (top.0, top.2);
        let edges = g.out_edges(NodeId(node));
        if top.1 >= edges.len() {
            on_path[node as usize] = false;
            stack.pop();
            continue;
        }
        let (v, p) = edges[top.1];
        top.1 += 1;
        if on_path[v.index()] {
            continue;
        }
        let q = path_prob * p;
        if !(q > theta) {
            continue;
        }
        steps += 1;
        if let Some(max) = budget {
            if steps > max {
                return Err(Error::PathBudgetExceeded { budget: max });
            }
        }
        if acc[v.index()] == T::zero() {
            // first path to v: the noisy-or of a single term is the term
            touched.push(v.0);
            acc[v.index()] = q;
        } else {
            acc[v.index()] = T::one() - (T::one() - acc[v.index()]) * (T::one() - q);
        }
        on_path[v.index()] = true;
        stack.push((v.0, 0, q));
    }

    touched.sort_unstable();
    Ok(touched
        .into_iter()
        .map(|v| (NodeId(v), acc[v as usize]))
        .collect())
}

/// Unbounded per-source reachability (every simple path contributes once).
pub fn gen_pr<T: Scalar>(g: &WicGraph<T>, source: NodeId) -> Result<Vec<(NodeId, T)>> {
    gen_pr_budgeted(g, source, T::zero(), None)
}

/// Theta-bounded per-source reachability.
pub fn gen_pr_bounded<T: Scalar>(
    g: &WicGraph<T>,
    source: NodeId,
    theta: T,
) -> Result<Vec<(NodeId, T)>> {
    gen_pr_budgeted(g, source, theta, None)
}

fn check_theta<T: Scalar>(theta: T) -> Result<()> {
    if theta >= T::zero() && theta < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "theta {} outside [0, 1)",
            theta
        )))
    }
}

impl<T: Scalar> ReachStore<T> {
    /// Run the per-source walk for every node (in parallel; sources are
    /// independent) and assemble forward plus transposed lists.
    pub fn build(g: &WicGraph<T>, theta: T, budget: Option<u64>) -> Result<Self> {
        check_theta(theta)?;
        let forward: Vec<Vec<(NodeId, T)>> = (0..g.node_count() as u32)
            .into_par_iter()
            .map(|u| gen_pr_budgeted(g, NodeId(u), theta, budget))
            .collect::<Result<_>>()?;
        Ok(Self::from_forward(forward, theta))
    }

    fn from_forward(forward: Vec<Vec<(NodeId, T)>>, theta: T) -> Self {
        let n = forward.len();
        let mut reverse: Vec<Vec<(NodeId, T)>> = vec![Vec::new(); n];
        for (u, list) in forward.iter().enumerate() {
            for &(v, p) in list {
                reverse[v.index()].push((NodeId(u as u32), p));
            }
        }
        for list in reverse.iter_mut() {
            list.sort_by_key(|&(n, _)| n);
        }
        ReachStore {
            forward,
            reverse,
            theta,
        }
    }

    pub fn node_count(&self) -> usize {
        self.forward.len()
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    /// Targets reachable from `u` with their p_r(u, v), ascending by target.
    pub fn forward_of(&self, u: NodeId) -> &[(NodeId, T)] {
        &self.forward[u.index()]
    }

    /// Sources that reach `v` with their p_r(u, v), ascending by source.
    pub fn reverse_of(&self, v: NodeId) -> &[(NodeId, T)] {
        &self.reverse[v.index()]
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> Option<T> {
        self.forward[u.index()]
            .binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|i| self.forward[u.index()][i].1)
    }

    pub fn entry_count(&self) -> usize {
        self.forward.iter().map(Vec::len).sum()
    }

    /// Write the store keyed by the graph fingerprint and theta. Records are
    /// `(u: u32, v: u32, p_r: f64)` little-endian after a magic header, so a
    /// reload is bit-exact.
    pub fn save_cache(&self, path: impl AsRef<Path>, g: &WicGraph<T>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&g.structural_hash().to_le_bytes())?;
        w.write_all(&self.theta.to_f64().unwrap().to_bits().to_le_bytes())?;
        w.write_all(&(self.entry_count() as u64).to_le_bytes())?;
        for (u, list) in self.forward.iter().enumerate() {
            for &(v, p) in list {
                w.write_all(&(u as u32).to_le_bytes())?;
                w.write_all(&v.0.to_le_bytes())?;
                w.write_all(&p.to_f64().unwrap().to_bits().to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Reload a cache written by [`ReachStore::save_cache`], verifying the
    /// magic header, graph fingerprint and theta.
    pub fn load_cache(path: impl AsRef<Path>, g: &WicGraph<T>) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if magic != *CACHE_MAGIC {
            return Err(Error::CacheMismatch("bad magic header".into()));
        }
        let hash = read_u64(&mut r)?;
        if hash != g.structural_hash() {
            return Err(Error::CacheMismatch(
                "cache was built for a different graph".into(),
            ));
        }
        let theta = f64::from_bits(read_u64(&mut r)?);
        let count = read_u64(&mut r)?;
        let mut forward: Vec<Vec<(NodeId, T)>> = vec![Vec::new(); g.node_count()];
        for _ in 0..count {
            let mut rec = [0u8; 16];
            r.read_exact(&mut rec)?;
            let u = u32::from_le_bytes(rec[0..4].try_into().unwrap());
            let v = u32::from_le_bytes(rec[4..8].try_into().unwrap());
            let p = f64::from_bits(u64::from_le_bytes(rec[8..16].try_into().unwrap()));
            if u as usize >= g.node_count() || v as usize >= g.node_count() {
                return Err(Error::CacheMismatch(format!("entry {u} -> {v} out of range")));
            }
            forward[u as usize].push((NodeId(v), T::from_f64(p).unwrap()));
        }
        Ok(Self::from_forward(forward, T::from_f64(theta).unwrap()))
    }
}

const CACHE_MAGIC: &[u8; 8] = b"WICPR001";

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

/// Materialize a per-node view of the store. Influence-value kinds read the
/// forward direction and weigh entries by the entry node's weight;
/// weight-discount kinds read the transpose and weigh by the root's weight.
pub fn build_tree<T: Scalar>(
    store: &ReachStore<T>,
    g: &WicGraph<T>,
    root: NodeId,
    kind: TreeKind,
) -> InfluenceTree<T> {
    let (entries, value) = match kind {
        TreeKind::InfluenceValue | TreeKind::BoundedInfluenceValue => {
            let entries = store.forward_of(root).to_vec();
            let value = entries
                .iter()
                .map(|&(v, p)| p * g.weight(v))
                .sum();
            (entries, value)
        }
        TreeKind::WeightDiscount | TreeKind::BoundedWeightDiscount => {
            let entries = store.reverse_of(root).to_vec();
            let value = entries.iter().map(|&(_, p)| p).sum::<T>() * g.weight(root);
            (entries, value)
        }
    };
    InfluenceTree {
        root,
        kind,
        entries,
        value,
    }
}
