//! Weight-reset seed selection.
//!
//! Both solvers score nodes by their residual influence value
//! `V_u = sum over stored targets of p_r(u, v) * residual_weight(v)` and pick
//! the best node each round. Claimed value is then removed from the pool:
//! the selected node's residual weight resets to zero and every stored
//! target's residual weight shrinks by the factor `(1 - p_r(root, target))`,
//! so later rounds only compete for value the current seeds are unlikely to
//! reach.
//!
//! The unbounded variant recomputes affected values from scratch after each
//! round; the bounded variant works against a theta-pruned store and applies
//! the algebraically equivalent incremental updates. At theta = 0 the two
//! produce identical seed sequences.
//!
//! By default a candidate's score also includes its own residual weight:
//! the objective counts the seed itself, and without that term a high-value
//! node with no outgoing edges could never win a round. `include_self_weight
//! = false` restores the bare-value selection rule.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{NodeId, WicGraph};
use crate::reachability::ReachStore;
use crate::result::SeedResult;
use crate::scalar::Scalar;

/// Residual weights below this are treated as exhausted and clamped to zero,
/// stopping update cascades on numerically dead nodes.
pub const WEIGHT_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectOptions {
    /// Score candidates by `V_u + residual_weight(u)` (true) or bare `V_u`.
    pub include_self_weight: bool,
    /// Optional cap on simple-path enumeration during pre-treatment.
    pub path_budget: Option<u64>,
}

impl Default for SelectOptions {
    fn default() -> Self {
        SelectOptions {
            include_self_weight: true,
            path_budget: None,
        }
    }
}

/// Mutable selection bookkeeping: residual weights, maintained values and
/// the seeds chosen so far.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionState<T> {
    residual_weights: Vec<T>,
    values: Vec<T>,
    selected: Vec<NodeId>,
    in_seed: Vec<bool>,
}

impl<T: Scalar> SelectionState<T> {
    fn new(g: &WicGraph<T>, store: &ReachStore<T>) -> Self {
        let residual_weights: Vec<T> = g.weights().to_vec();
        let values = (0..g.node_count() as u32)
            .map(|u| value_from_scratch(store, &residual_weights, NodeId(u)))
            .collect();
        SelectionState {
            residual_weights,
            values,
            selected: Vec::new(),
            in_seed: vec![false; g.node_count()],
        }
    }

    pub fn residual_weight(&self, u: NodeId) -> T {
        self.residual_weights[u.index()]
    }

    pub fn value(&self, u: NodeId) -> T {
        self.values[u.index()]
    }

    pub fn selected(&self) -> &[NodeId] {
        &self.selected
    }

    /// Recompute every value from the residual weights; the maintained
    /// values must match this within numerical noise at any point between
    /// rounds.
    pub fn values_from_scratch(&self, store: &ReachStore<T>) -> Vec<T> {
        (0..self.values.len() as u32)
            .map(|u| value_from_scratch(store, &self.residual_weights, NodeId(u)))
            .collect()
    }

    fn score(&self, u: usize, include_self_weight: bool) -> T {
        if include_self_weight {
            self.values[u] + self.residual_weights[u]
        } else {
            self.values[u]
        }
    }

    /// Best unselected node, ties to the smallest id.
    fn argmax(&self, include_self_weight: bool) -> (NodeId, T) {
        let mut best: Option<(usize, T)> = None;
        for u in 0..self.values.len() {
            if self.in_seed[u] {
                continue;
            }
            let s = self.score(u, include_self_weight);
            match best {
                Some((_, bs)) if !(s > bs) => {}
                _ => best = Some((u, s)),
            }
        }
        let (u, s) = best.expect("k <= node_count leaves a candidate");
        (NodeId(u as u32), s)
    }

    fn clamp(w: T) -> T {
        if w < T::from_f64(WEIGHT_CLAMP).unwrap() {
            T::zero()
        } else {
            w
        }
    }

    /// One unbounded-variant round: apply the weight reset and discounts,
    /// then rebuild every affected value from scratch.
    fn select_full(&mut self, store: &ReachStore<T>, root: NodeId) {
        self.in_seed[root.index()] = true;
        self.selected.push(root);
        self.residual_weights[root.index()] = T::zero();

        let mut dirty = vec![false; self.values.len()];
        for &(v, _) in store.reverse_of(root) {
            dirty[v.index()] = true;
        }
        for &(target, p) in store.forward_of(root) {
            let old = self.residual_weights[target.index()];
            if old == T::zero() {
                continue;
            }
            let new = Self::clamp(old * (T::one() - p));
            if new != old {
                self.residual_weights[target.index()] = new;
                for &(x, _) in store.reverse_of(target) {
                    dirty[x.index()] = true;
                }
            }
        }
        for (u, flag) in dirty.iter().enumerate() {
            if *flag {
                self.values[u] =
                    value_from_scratch(store, &self.residual_weights, NodeId(u as u32));
            }
        }
    }

    /// One bounded-variant round: subtract the root's weight contribution
    /// from its predecessors, then propagate each discounted weight delta to
    /// that target's predecessors.
    fn select_incremental(&mut self, store: &ReachStore<T>, root: NodeId) {
        self.in_seed[root.index()] = true;
        self.selected.push(root);

        let root_weight = self.residual_weights[root.index()];
        for &(v, p) in store.reverse_of(root) {
            self.values[v.index()] -= root_weight * p;
        }
        for &(target, p) in store.forward_of(root) {
            let old = self.residual_weights[target.index()];
            if old == T::zero() {
                continue;
            }
            let new = Self::clamp(old * (T::one() - p));
            let delta = old - new;
            if delta == T::zero() {
                continue;
            }
            self.residual_weights[target.index()] = new;
            for &(x, q) in store.reverse_of(target) {
                self.values[x.index()] -= q * delta;
            }
        }
        self.residual_weights[root.index()] = T::zero();
    }
}

fn value_from_scratch<T: Scalar>(store: &ReachStore<T>, weights: &[T], u: NodeId) -> T {
    store
        .forward_of(u)
        .iter()
        .map(|&(v, p)| p * weights[v.index()])
        .sum()
}

fn check_k<T: Scalar>(g: &WicGraph<T>, k: usize) -> Result<()> {
    if k > g.node_count() {
        Err(Error::KTooLarge {
            k,
            count: g.node_count(),
        })
    } else {
        Ok(())
    }
}

/// Unbounded weight-reset selection over a store built with theta = 0.
pub fn wr_select<T: Scalar>(
    g: &WicGraph<T>,
    store: &ReachStore<T>,
    k: usize,
    opts: SelectOptions,
) -> Result<SeedResult<T>> {
    Ok(wr_select_with_state(g, store, k, opts)?.0)
}

/// As [`wr_select`], also returning the final bookkeeping state.
pub fn wr_select_with_state<T: Scalar>(
    g: &WicGraph<T>,
    store: &ReachStore<T>,
    k: usize,
    opts: SelectOptions,
) -> Result<(SeedResult<T>, SelectionState<T>)> {
    check_k(g, k)?;
    if store.theta() != T::zero() {
        return Err(Error::InvalidParameter(
            "unbounded selection requires a store built with theta = 0".into(),
        ));
    }
    let start = Instant::now();
    let mut state = SelectionState::new(g, store);
    let mut result = SeedResult::new();
    for _ in 0..k {
        let (root, score) = state.argmax(opts.include_self_weight);
        state.select_full(store, root);
        result.seeds.push(root);
        result.step_scores.push(score);
        result.step_times.push(start.elapsed());
    }
    result.total_time = start.elapsed();
    Ok((result, state))
}

/// Bounded weight-reset selection: runs the theta-bounded pre-treatment for
/// every source, then k incremental selection rounds.
pub fn bwr_select<T: Scalar>(
    g: &WicGraph<T>,
    k: usize,
    theta: T,
    opts: SelectOptions,
) -> Result<SeedResult<T>> {
    check_k(g, k)?;
    let start = Instant::now();
    let store = ReachStore::build(g, theta, opts.path_budget)?;
    let (mut result, _) = bwr_rounds(g, &store, k, opts, start)?;
    result.total_time = start.elapsed();
    Ok(result)
}

/// Bounded-variant selection against a pre-built store (reusable across k).
pub fn bwr_select_with_store<T: Scalar>(
    g: &WicGraph<T>,
    store: &ReachStore<T>,
    k: usize,
    opts: SelectOptions,
) -> Result<SeedResult<T>> {
    check_k(g, k)?;
    let start = Instant::now();
    let (mut result, _) = bwr_rounds(g, store, k, opts, start)?;
    result.total_time = start.elapsed();
    Ok(result)
}

/// As [`bwr_select_with_store`], also returning the bookkeeping state.
pub fn bwr_select_with_state<T: Scalar>(
    g: &WicGraph<T>,
    store: &ReachStore<T>,
    k: usize,
    opts: SelectOptions,
) -> Result<(SeedResult<T>, SelectionState<T>)> {
    check_k(g, k)?;
    bwr_rounds(g, store, k, opts, Instant::now())
}

fn bwr_rounds<T: Scalar>(
    g: &WicGraph<T>,
    store: &ReachStore<T>,
    k: usize,
    opts: SelectOptions,
    start: Instant,
) -> Result<(SeedResult<T>, SelectionState<T>)> {
    let mut state = SelectionState::new(g, store);
    let mut result = SeedResult::new();
    for _ in 0..k {
        let (root, score) = state.argmax(opts.include_self_weight);
        state.select_incremental(store, root);
        result.seeds.push(root);
        result.step_scores.push(score);
        result.step_times.push(start.elapsed());
    }
    result.total_time = start.elapsed();
    Ok((result, state))
}

/// Outcome of the theta-suggestion formula for a target slack epsilon:
/// the threshold, the bounded propagation horizon it implies and the
/// unbounded-to-bounded value ratio bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaAnalysis<T> {
    /// Mean edge probability.
    pub p: T,
    /// Mean out-degree.
    pub d: T,
    /// Steps influence is assumed to propagate.
    pub alpha: T,
    /// Target approximation slack.
    pub epsilon: T,
    pub theta_suggested: T,
    /// Bounded horizon log_p(theta).
    pub alpha_prime: T,
    /// Bound on (unbounded value) / (bounded value); equals
    /// `(1 - 1/e) * (1 + epsilon)` at the suggested theta.
    pub ratio_bound: T,
}

impl<T: Scalar> ThetaAnalysis<T> {
    /// Implied multiplier on the unbounded variant's guarantee.
    pub fn beta(&self) -> T {
        self.ratio_bound.recip()
    }
}

/// Horizon implied by a threshold: the number of mean-probability steps
/// before a path product drops to `theta`.
pub fn implied_horizon<T: Scalar>(p: T, theta: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::ThetaFormula(format!("p = {} must be in (0, 1)", p)));
    }
    if !(theta > T::zero() && theta < T::one()) {
        return Err(Error::ThetaFormula(format!(
            "theta = {} must be in (0, 1)",
            theta
        )));
    }
    Ok(theta.ln() / p.ln())
}

/// Value retained with a bounded horizon when every pair is assumed
/// reachable: `1 - (p*d)^alpha_prime`.
pub fn ratio_floor<T: Scalar>(p: T, d: T, alpha_prime: T) -> T {
    T::one() - (p * d).powf(alpha_prime)
}

/// Threshold suggestion: solve the approximation-slack equation for theta
/// and report the implied horizon and ratio bound. Rejects parameter
/// regions where the formula's base leaves (0, 1), naming the failing
/// inequality.
pub fn suggest_theta<T: Scalar>(p: T, d: T, alpha: T, epsilon: T) -> Result<ThetaAnalysis<T>> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::ThetaFormula(format!("p = {} must be in (0, 1)", p)));
    }
    if !(d > T::zero()) {
        return Err(Error::ThetaFormula(format!("d = {} must be positive", d)));
    }
    if d == T::one() {
        return Err(Error::ThetaFormula(
            "d = 1 makes log_d(p) undefined".into(),
        ));
    }
    if !(alpha >= T::one()) {
        return Err(Error::ThetaFormula(format!("alpha = {} must be >= 1", alpha)));
    }
    if !(epsilon > T::zero()) {
        return Err(Error::ThetaFormula(format!(
            "epsilon = {} must be positive",
            epsilon
        )));
    }
    let pd = p * d;
    let numerator = T::one() - pd.powf(alpha);
    if !(numerator > T::zero()) {
        return Err(Error::ThetaFormula(format!(
            "1 - (p*d)^alpha = {} must be positive (requires p*d < 1)",
            numerator
        )));
    }
    let shrink = T::one() - T::from_f64(1.0 / std::f64::consts::E).unwrap();
    let base = T::one() - numerator / (shrink * (T::one() + epsilon));
    if !(base > T::zero() && base < T::one()) {
        return Err(Error::ThetaFormula(format!(
            "base 1 - (1-(p*d)^alpha)/((1-1/e)(1+eps)) = {} must lie in (0, 1)",
            base
        )));
    }
    let log_d_p = p.ln() / d.ln();
    let denom = T::one() + log_d_p.recip();
    if denom == T::zero() {
        return Err(Error::ThetaFormula(
            "p = 1/d makes the exponent 1 + 1/log_d(p) vanish".into(),
        ));
    }
    let theta = base.powf(denom.recip());
    if !(theta > T::zero() && theta < T::one()) {
        return Err(Error::ThetaFormula(format!(
            "suggested theta = {} left (0, 1)",
            theta
        )));
    }
    let alpha_prime = implied_horizon(p, theta)?;
    let ratio_bound = numerator / (T::one() - pd.powf(alpha_prime));
    Ok(ThetaAnalysis {
        p,
        d,
        alpha,
        epsilon,
        theta_suggested: theta,
        alpha_prime,
        ratio_bound,
    })
}
