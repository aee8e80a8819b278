//! `wicmax`: benchmark harness for influence maximization on weighted
//! independent cascade graphs.

mod experiment;
mod output;
mod schemes;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use experiment::{Algorithm, ExperimentConfig, Model};
use output::fmt_g6;
use schemes::{ProbArg, WeightArg};
use wicmax_core::wrbwr::suggest_theta;

#[derive(Parser)]
#[command(name = "wicmax", version, about = "influence maximization benchmark harness")]
struct Cli {
    /// Worker threads; the WICMAX_THREADS environment variable is the
    /// fallback, defaulting to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select seeds with one algorithm over a k schedule and evaluate each
    /// prefix by simulation.
    Run(RunArgs),
    /// Bounded weight-reset across a theta list, reporting spread and time
    /// per theta.
    ThetaSweep(SweepArgs),
    /// The same algorithm under unit weights and under the weighted model,
    /// with a weight-blind cross evaluation.
    CompareModels(CompareArgs),
    /// Evaluate the theta-suggestion formula for given mean probability,
    /// mean out-degree, horizon and slack.
    SuggestTheta(SuggestArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Plain-text edge list ('#' comments, "<u> <v>" per line).
    #[arg(long)]
    dataset: PathBuf,

    /// Expand each input edge to both directions.
    #[arg(long)]
    undirected: bool,

    /// ic: unit weights; wic: random integer weights up to 10.
    #[arg(long, value_enum, default_value = "wic")]
    model: Model,

    /// Edge probability scheme: trivalency, constant:<p> or file:<path>.
    #[arg(long, default_value = "trivalency")]
    prob: ProbArg,

    /// Override the model's weight scheme: uniform:<w>, randint:<max> or
    /// file:<path>.
    #[arg(long)]
    weights: Option<WeightArg>,

    /// Pruning threshold of the bounded solver.
    #[arg(long, default_value_t = 1e-4)]
    theta: f64,

    /// Simulations per candidate during greedy selection.
    #[arg(long = "R-select", default_value_t = 10_000)]
    r_select: usize,

    /// Simulations per evaluated seed set.
    #[arg(long = "R-eval", default_value_t = 20_000)]
    r_eval: usize,

    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Result CSV path (written atomically; byte-identical for a fixed
    /// configuration).
    #[arg(long)]
    out: PathBuf,

    /// Allow datasets beyond 100k nodes.
    #[arg(long)]
    large: bool,

    /// Allow greedy beyond 50k nodes.
    #[arg(long)]
    force: bool,

    /// Cap on simple-path enumeration steps during pre-treatment; exceeding
    /// it aborts instead of hanging.
    #[arg(long)]
    path_budget: Option<u64>,

    /// Score weight-reset candidates by bare value instead of value plus own
    /// residual weight.
    #[arg(long)]
    score_without_self: bool,

    /// Lazy (priority-queue) greedy evaluation.
    #[arg(long)]
    lazy: bool,

    /// Sidecar CSV for wall times (non-reproducible by nature).
    #[arg(long)]
    timings_out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Seed set sizes, strictly increasing.
    #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,20,30,40,50")]
    k: Vec<usize>,

    /// Selection algorithm.
    #[arg(long, value_enum)]
    algo: Algorithm,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Seed set size of every sweep point.
    #[arg(long, default_value_t = 50)]
    k: usize,

    /// Thetas in output order.
    #[arg(long, value_delimiter = ',', default_value = "1e-1,1e-2,1e-3,1e-4,1e-5")]
    thetas: Vec<f64>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,20,30,40,50")]
    k: Vec<usize>,

    #[arg(long, value_enum)]
    algo: Algorithm,
}

#[derive(Args)]
struct SuggestArgs {
    /// Mean edge probability.
    #[arg(long)]
    p: f64,

    /// Mean out-degree.
    #[arg(long)]
    d: f64,

    /// Steps influence is assumed to propagate.
    #[arg(long)]
    alpha: f64,

    /// Approximation slack.
    #[arg(long)]
    epsilon: f64,
}

fn build_config(common: CommonArgs, k: Vec<usize>, algo: Algorithm) -> ExperimentConfig {
    ExperimentConfig {
        dataset: common.dataset,
        undirected: common.undirected,
        model: common.model,
        algorithm: algo,
        prob_scheme: common.prob.0,
        weight_scheme: common.weights.map(|w| w.0),
        k_schedule: k,
        theta: common.theta,
        r_select: common.r_select,
        r_eval: common.r_eval,
        rng_seed: common.seed,
        out: common.out,
        force: common.force,
        large: common.large,
        path_budget: common.path_budget,
        score_without_self: common.score_without_self,
        lazy: common.lazy,
        timings_out: common.timings_out,
    }
}

fn init_threads(flag: Option<usize>) -> Result<()> {
    let from_env = std::env::var("WICMAX_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(threads) = flag.or(from_env) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    init_threads(cli.threads)?;
    match cli.command {
        Command::Run(args) => {
            let cfg = build_config(args.common, args.k, args.algo);
            let rows = cfg.run()?;
            eprintln!("wrote {} rows to {}", rows.len(), cfg.out.display());
        }
        Command::ThetaSweep(args) => {
            let thetas = args.thetas.clone();
            let cfg = build_config(args.common, vec![args.k], Algorithm::Bwr);
            let rows = cfg.theta_sweep(&thetas)?;
            eprintln!("wrote {} rows to {}", rows.len(), cfg.out.display());
        }
        Command::CompareModels(args) => {
            let cfg = build_config(args.common, args.k, args.algo);
            let rows = cfg.compare_models()?;
            eprintln!("wrote {} rows to {}", rows.len(), cfg.out.display());
        }
        Command::SuggestTheta(args) => {
            let analysis = suggest_theta(args.p, args.d, args.alpha, args.epsilon)?;
            println!("theta_suggested = {}", fmt_g6(analysis.theta_suggested));
            println!("alpha_prime = {}", fmt_g6(analysis.alpha_prime));
            println!("ratio_bound = {}", fmt_g6(analysis.ratio_bound));
            println!("beta = {}", fmt_g6(analysis.beta()));
        }
    }
    Ok(())
}
