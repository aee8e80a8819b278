//! The benchmark harness: load a dataset, parameterize it for the chosen
//! model, select seeds once at the largest k, evaluate every prefix with the
//! Monte Carlo estimator, and emit CSV.
//!
//! The result CSV is byte-deterministic for a fixed configuration: selection
//! and evaluation use separate seed-derived RNG streams, rows are emitted in
//! a fixed order, and floats are rendered with six significant digits. Wall
//! times are inherently non-reproducible, so they go to stderr (and to an
//! optional sidecar file) instead of the main CSV.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;

use wicmax_core::baselines::{pagerank_select, random_select, PageRankConfig};
use wicmax_core::cascade::estimate_sigma_stats;
use wicmax_core::greedy::{greedy_select, GreedyConfig};
use wicmax_core::reachability::ReachStore;
use wicmax_core::rng::derive_seed;
use wicmax_core::wrbwr::{bwr_select, wr_select, SelectOptions};
use wicmax_core::{Graph64, ProbScheme, SeedResult, WeightScheme};

use crate::output::{fmt_g6, write_atomic};

/// Columns of the main result CSV (schema v1).
const RESULT_HEADER: &str =
    "schema,algorithm,model,k,sigma_mean,sigma_stderr,activated_count_mean,theta,rng_seed";
const SCHEMA: &str = "v1";

/// Datasets above this refuse to run without --large.
const LARGE_NODE_GATE: usize = 100_000;
/// Greedy refuses above this without --force.
const GREEDY_NODE_GATE: usize = 50_000;

// Seed-derivation tags: one independent stream family per concern.
const TAG_PROB: u64 = 101;
const TAG_WEIGHT: u64 = 202;
const TAG_SELECT: u64 = 303;
const TAG_EVAL: u64 = 404;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Ic,
    Wic,
}

impl Model {
    pub fn label(self) -> &'static str {
        match self {
            Model::Ic => "ic",
            Model::Wic => "wic",
        }
    }

    /// Default weight scheme of the model: unit weights for plain cascade,
    /// random integers up to 10 for the weighted one.
    pub fn default_weights(self) -> WeightScheme<f64> {
        match self {
            Model::Ic => WeightScheme::Uniform(1.0),
            Model::Wic => WeightScheme::RandomInt(10),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Greedy,
    Wr,
    Bwr,
    Pagerank,
    Random,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Wr => "wr",
            Algorithm::Bwr => "bwr",
            Algorithm::Pagerank => "pagerank",
            Algorithm::Random => "random",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub dataset: PathBuf,
    pub undirected: bool,
    pub model: Model,
    pub algorithm: Algorithm,
    pub prob_scheme: ProbScheme<f64>,
    /// None: the model's default.
    pub weight_scheme: Option<WeightScheme<f64>>,
    pub k_schedule: Vec<usize>,
    pub theta: f64,
    pub r_select: usize,
    pub r_eval: usize,
    pub rng_seed: u64,
    pub out: PathBuf,
    pub force: bool,
    pub large: bool,
    pub path_budget: Option<u64>,
    pub score_without_self: bool,
    pub lazy: bool,
    pub timings_out: Option<PathBuf>,
}

/// One (algorithm, k) outcome.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub algorithm: String,
    pub model: String,
    pub k: usize,
    pub sigma_mean: f64,
    pub sigma_stderr: f64,
    pub activated_count_mean: f64,
    pub select_time_ms: f64,
    pub eval_time_ms: f64,
    pub theta: f64,
    pub rng_seed: u64,
    pub seeds: Vec<u64>,
}

impl ExperimentConfig {
    fn validate_k(&self, node_count: usize) -> Result<()> {
        if self.k_schedule.is_empty() {
            bail!("k schedule is empty");
        }
        if !self.k_schedule.windows(2).all(|w| w[0] < w[1]) {
            bail!("k schedule must be strictly increasing: {:?}", self.k_schedule);
        }
        let k_max = *self.k_schedule.last().unwrap();
        if k_max > node_count {
            bail!("k = {k_max} exceeds the {node_count} nodes of the dataset");
        }
        if self.r_eval == 0 {
            bail!("R-eval must be at least 1");
        }
        Ok(())
    }

    fn select_options(&self) -> SelectOptions {
        SelectOptions {
            include_self_weight: !self.score_without_self,
            path_budget: self.path_budget,
        }
    }

    /// Load the dataset and parameterize it for `model`. The probability
    /// draw is independent of the model, so IC and WIC runs share structure.
    pub fn load_graph(&self, model: Model) -> Result<Graph64> {
        let mut g = Graph64::load_edge_list(&self.dataset, self.undirected)
            .with_context(|| format!("loading {}", self.dataset.display()))?;
        if g.node_count() > LARGE_NODE_GATE && !self.large {
            bail!(
                "{} has {} nodes; pass --large to run datasets beyond {}",
                self.dataset.display(),
                g.node_count(),
                LARGE_NODE_GATE
            );
        }
        g.assign_probabilities(&self.prob_scheme, derive_seed(self.rng_seed, TAG_PROB))?;
        let weights = self
            .weight_scheme
            .clone()
            .unwrap_or_else(|| model.default_weights());
        g.assign_weights(&weights, derive_seed(self.rng_seed, TAG_WEIGHT))?;
        Ok(g)
    }

    /// Run the configured algorithm once at the largest k. Greedy, the
    /// weight-reset variants, PageRank and random selection are all
    /// incremental, so smaller k values are prefixes of this run.
    pub fn select(&self, g: &Graph64, algorithm: Algorithm, model: Model) -> Result<SeedResult<f64>> {
        let k_max = *self.k_schedule.last().unwrap();
        let seed = derive_seed(self.rng_seed, TAG_SELECT);
        let result = match algorithm {
            Algorithm::Greedy => {
                if g.node_count() > GREEDY_NODE_GATE && !self.force {
                    bail!(
                        "greedy on {} nodes would take hours; pass --force to insist",
                        g.node_count()
                    );
                }
                greedy_select(
                    g,
                    &GreedyConfig {
                        k: k_max,
                        reps: self.r_select,
                        rng_seed: seed,
                        lazy: self.lazy,
                    },
                )?
            }
            Algorithm::Wr => {
                let store = ReachStore::build(g, 0.0, self.path_budget)?;
                wr_select(g, &store, k_max, self.select_options())?
            }
            Algorithm::Bwr => bwr_select(g, k_max, self.theta, self.select_options())?,
            Algorithm::Pagerank => {
                let cfg = PageRankConfig {
                    weighted_votes: model == Model::Wic,
                    ..PageRankConfig::default()
                };
                pagerank_select(g, k_max, &cfg)?
            }
            Algorithm::Random => random_select(g, k_max, seed)?,
        };
        Ok(result)
    }

    /// Evaluate each k prefix of the selection with a fresh evaluation
    /// stream shared per (dataset, model) so algorithm comparisons are
    /// paired.
    fn evaluate_rows(
        &self,
        g: &Graph64,
        selection: &SeedResult<f64>,
        algorithm: Algorithm,
        model: Model,
    ) -> Result<Vec<ResultRow>> {
        let eval_seed = derive_seed(self.rng_seed, TAG_EVAL);
        let theta = match algorithm {
            Algorithm::Bwr => self.theta,
            _ => 0.0,
        };
        let mut rows = Vec::with_capacity(self.k_schedule.len());
        for &k in &self.k_schedule {
            let seeds = &selection.seeds[..k];
            let eval_start = std::time::Instant::now();
            let stats = estimate_sigma_stats(g, seeds, self.r_eval, eval_seed)?;
            let eval_time = eval_start.elapsed();
            let select_time = selection
                .step_times
                .get(k - 1)
                .copied()
                .unwrap_or(selection.total_time);
            rows.push(ResultRow {
                algorithm: algorithm.label().to_string(),
                model: model.label().to_string(),
                k,
                sigma_mean: stats.value.mean,
                sigma_stderr: stats.value.std_error,
                activated_count_mean: stats.activated_mean,
                select_time_ms: as_ms(select_time),
                eval_time_ms: as_ms(eval_time),
                theta,
                rng_seed: self.rng_seed,
                seeds: seeds.iter().map(|&s| g.label(s)).collect(),
            });
        }
        Ok(rows)
    }

    /// The `run` subcommand: one row per k, CSV to `out`, timings and seed
    /// sets to stderr.
    pub fn run(&self) -> Result<Vec<ResultRow>> {
        let g = self.load_graph(self.model)?;
        self.validate_k(g.node_count())?;
        let selection = self.select(&g, self.algorithm, self.model)?;
        let rows = self.evaluate_rows(&g, &selection, self.algorithm, self.model)?;

        let mut csv = String::from(RESULT_HEADER);
        csv.push('\n');
        for row in &rows {
            writeln!(
                csv,
                "{SCHEMA},{},{},{},{},{},{},{},{}",
                row.algorithm,
                row.model,
                row.k,
                fmt_g6(row.sigma_mean),
                fmt_g6(row.sigma_stderr),
                fmt_g6(row.activated_count_mean),
                fmt_g6(row.theta),
                row.rng_seed
            )?;
        }
        write_atomic(&self.out, &csv)?;
        self.emit_timings(&rows)?;
        Ok(rows)
    }

    /// The `compare-models` subcommand: the same algorithm under unit
    /// weights and under the weighted model with shared structure, plus the
    /// weight-blind cross evaluation (unit-weight seeds scored under the
    /// true weights).
    pub fn compare_models(&self) -> Result<Vec<CompareRow>> {
        let g_ic = self.load_graph(Model::Ic)?;
        let g_wic = self.load_graph(Model::Wic)?;
        self.validate_k(g_ic.node_count())?;

        let sel_ic = self.select(&g_ic, self.algorithm, Model::Ic)?;
        let sel_wic = self.select(&g_wic, self.algorithm, Model::Wic)?;
        let eval_seed = derive_seed(self.rng_seed, TAG_EVAL);

        let mut rows = Vec::new();
        for &k in &self.k_schedule {
            let ic = estimate_sigma_stats(&g_ic, &sel_ic.seeds[..k], self.r_eval, eval_seed)?;
            let wic = estimate_sigma_stats(&g_wic, &sel_wic.seeds[..k], self.r_eval, eval_seed)?;
            let blind = estimate_sigma_stats(&g_wic, &sel_ic.seeds[..k], self.r_eval, eval_seed)?;
            rows.push(CompareRow {
                algorithm: self.algorithm.label().to_string(),
                k,
                ic_sigma: ic.value.mean,
                wic_sigma: wic.value.mean,
                blind_wic_sigma: blind.value.mean,
                ratio: if ic.value.mean > 0.0 {
                    wic.value.mean / ic.value.mean
                } else {
                    f64::NAN
                },
                rng_seed: self.rng_seed,
            });
        }

        let mut csv =
            String::from("schema,algorithm,k,ic_sigma,wic_sigma,blind_wic_sigma,wic_ic_ratio,rng_seed\n");
        for row in &rows {
            writeln!(
                csv,
                "{SCHEMA},{},{},{},{},{},{},{}",
                row.algorithm,
                row.k,
                fmt_g6(row.ic_sigma),
                fmt_g6(row.wic_sigma),
                fmt_g6(row.blind_wic_sigma),
                fmt_g6(row.ratio),
                row.rng_seed
            )?;
        }
        write_atomic(&self.out, &csv)?;
        for row in &rows {
            eprintln!(
                "compare {} k={}: ic={} wic={} blind={} ratio={}",
                row.algorithm,
                row.k,
                fmt_g6(row.ic_sigma),
                fmt_g6(row.wic_sigma),
                fmt_g6(row.blind_wic_sigma),
                fmt_g6(row.ratio)
            );
        }
        Ok(rows)
    }

    /// The `theta-sweep` subcommand: bounded weight-reset at each theta, one
    /// row per theta in the given order.
    pub fn theta_sweep(&self, thetas: &[f64]) -> Result<Vec<ResultRow>> {
        if thetas.is_empty() {
            bail!("theta sweep needs at least one theta");
        }
        let g = self.load_graph(self.model)?;
        self.validate_k(g.node_count())?;
        let k_max = *self.k_schedule.last().unwrap();
        let eval_seed = derive_seed(self.rng_seed, TAG_EVAL);

        let mut rows = Vec::new();
        for &theta in thetas {
            if !(0.0..1.0).contains(&theta) {
                bail!("theta {theta} outside [0, 1)");
            }
            let selection = bwr_select(&g, k_max, theta, self.select_options())?;
            let eval_start = std::time::Instant::now();
            let stats = estimate_sigma_stats(&g, &selection.seeds, self.r_eval, eval_seed)?;
            rows.push(ResultRow {
                algorithm: Algorithm::Bwr.label().to_string(),
                model: self.model.label().to_string(),
                k: k_max,
                sigma_mean: stats.value.mean,
                sigma_stderr: stats.value.std_error,
                activated_count_mean: stats.activated_mean,
                select_time_ms: as_ms(selection.total_time),
                eval_time_ms: as_ms(eval_start.elapsed()),
                theta,
                rng_seed: self.rng_seed,
                seeds: selection.seeds.iter().map(|&s| g.label(s)).collect(),
            });
        }

        let mut csv = String::from(
            "schema,algorithm,model,k,theta,sigma_mean,sigma_stderr,activated_count_mean,rng_seed\n",
        );
        for row in &rows {
            writeln!(
                csv,
                "{SCHEMA},{},{},{},{},{},{},{},{}",
                row.algorithm,
                row.model,
                row.k,
                fmt_g6(row.theta),
                fmt_g6(row.sigma_mean),
                fmt_g6(row.sigma_stderr),
                fmt_g6(row.activated_count_mean),
                row.rng_seed
            )?;
        }
        write_atomic(&self.out, &csv)?;
        self.emit_timings(&rows)?;
        Ok(rows)
    }

    /// Wall times and seed sets: stderr always, sidecar CSV on request.
    fn emit_timings(&self, rows: &[ResultRow]) -> Result<()> {
        for row in rows {
            eprintln!(
                "{} {} k={} theta={}: select_ms={:.3} eval_ms={:.3} sigma={} seeds=[{}]",
                row.algorithm,
                row.model,
                row.k,
                fmt_g6(row.theta),
                row.select_time_ms,
                row.eval_time_ms,
                fmt_g6(row.sigma_mean),
                row.seeds
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
        }
        if let Some(path) = &self.timings_out {
            let mut csv = String::from("algorithm,model,k,theta,select_time_ms,eval_time_ms\n");
            for row in rows {
                writeln!(
                    csv,
                    "{},{},{},{},{:.3},{:.3}",
                    row.algorithm,
                    row.model,
                    row.k,
                    fmt_g6(row.theta),
                    row.select_time_ms,
                    row.eval_time_ms
                )?;
            }
            write_atomic(path, &csv)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct CompareRow {
    pub algorithm: String,
    pub k: usize,
    pub ic_sigma: f64,
    pub wic_sigma: f64,
    pub blind_wic_sigma: f64,
    pub ratio: f64,
    pub rng_seed: u64,
}

fn as_ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}
