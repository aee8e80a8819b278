//! Influence maximization on the weighted independent cascade model: a
//! directed graph whose edges carry propagation probabilities and whose
//! nodes carry non-negative value weights. The objective of seed selection
//! is the expected total weight of activated nodes, not the activated count;
//! with all weights 1 the model reduces to the plain independent cascade.
//!
//! The crate provides
//! - graph loading and parameterization ([`graph`]),
//! - ground-truth cascade simulation with a Monte Carlo estimator and an
//!   exact enumeration oracle for tiny graphs ([`cascade`]),
//! - hill-climbing greedy selection ([`greedy`]),
//! - simple-path reachability pre-treatment with theta-bounded pruning
//!   ([`reachability`]),
//! - the weight-reset and bounded weight-reset solvers plus the
//!   theta-suggestion analysis ([`wrbwr`]),
//! - PageRank and random baselines ([`baselines`]).
//!
//! Everything numeric is generic over the [`scalar::Scalar`] float type;
//! the `*64` aliases below pin the common `f64` instantiations.

// negated comparisons in validation guards are deliberate: they reject NaN
// parameters, which `x < limit` would silently accept
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod cascade;
pub mod error;
pub mod graph;
pub mod greedy;
pub mod reachability;
pub mod result;
pub mod rng;
pub mod scalar;
pub mod wrbwr;

pub use error::{Error, Result};
pub use graph::{NodeId, ProbScheme, WeightScheme, WicGraph};
pub use result::SeedResult;
pub use scalar::Scalar;

/// Default-precision aliases.
pub type Graph64 = graph::WicGraph<f64>;
pub type Graph32 = graph::WicGraph<f32>;
pub type ReachStore64 = reachability::ReachStore<f64>;
pub type InfluenceTree64 = reachability::InfluenceTree<f64>;
pub type SeedResult64 = result::SeedResult<f64>;
pub type SpreadEstimate64 = cascade::SpreadEstimate<f64>;
pub type ThetaAnalysis64 = wrbwr::ThetaAnalysis<f64>;
