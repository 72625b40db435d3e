use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use epictrl_core::saa::{Mode, Rounding};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "epictrl", version, about = "Budgeted edge and node interventions against SIR spread")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON config file. Flags take precedence over its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write results to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,

    /// Exit with code 4 when the sparsification regime check fails.
    #[arg(long, global = true)]
    pub strict_regime: bool,

    /// Record wall-clock runtime in JSON reports.
    #[arg(long, global = true)]
    pub timing: bool,

    /// Cap on worker threads.
    #[arg(long, env = "EPICTRL_THREADS", global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random instance as an edge list.
    Generate(GenerateArgs),
    /// Estimate expected infections under an intervention.
    Percolate(PercolateArgs),
    /// Sample-average LP with rounding.
    SolveSaa(SaaArgs),
    /// Sampled-cut algorithm for unit costs and uniform probability.
    SolveKarger(KargerArgs),
    /// Vaccination variant of solve-saa.
    SolveNode(SaaArgs),
    /// Simple-path census of a graph or a Chung-Lu model.
    CountPaths(CountPathsArgs),
    /// Path-count bound tables.
    Bounds(BoundsArgs),
    /// Run several algorithms and evaluate them on shared samples.
    Compare(CompareArgs),
    /// Exhaustive reference solutions for small instances.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Clone, Default, Args)]
pub struct InstanceArgs {
    /// Edge-list file (`u v cost prob` per line).
    #[arg(long)]
    pub graph: Option<PathBuf>,

    /// Chung-Lu model JSON; one graph is generated from it with the seed.
    #[arg(long)]
    pub model: Option<PathBuf>,

    /// Overrides every transmission probability.
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct InterventionArgs {
    /// Edge ids to remove, in file order.
    #[arg(long, value_delimiter = ',')]
    pub remove_edges: Vec<usize>,

    /// Vertex labels to vaccinate.
    #[arg(long, value_delimiter = ',')]
    pub vaccinate: Vec<String>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Chung-Lu model JSON.
    #[arg(long, conflicts_with_all = ["n", "m"])]
    pub model: Option<PathBuf>,

    /// Vertex count of a uniform random graph.
    #[arg(long, requires = "m")]
    pub n: Option<usize>,

    /// Edge count of a uniform random graph.
    #[arg(long, requires = "n")]
    pub m: Option<usize>,

    /// Start the uniform random graph from a spanning tree.
    #[arg(long)]
    pub connected: bool,

    /// Uniform transmission probability.
    #[arg(long, conflicts_with = "p_range")]
    pub p: Option<f64>,

    /// Draw each probability uniformly from `lo,hi`.
    #[arg(long, value_delimiter = ',')]
    pub p_range: Option<Vec<f64>>,

    /// Draw integer edge costs uniformly from `1..=cost_max`.
    #[arg(long)]
    pub cost_max: Option<u32>,

    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PercolateArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,

    #[command(flatten)]
    pub intervention: InterventionArgs,

    /// Monte Carlo samples.
    #[arg(long)]
    pub samples: Option<u64>,

    /// Also enumerate the exact expectation.
    #[arg(long)]
    pub exact: bool,

    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SaaArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,

    #[arg(long)]
    pub budget: Option<f64>,

    #[arg(long)]
    pub epsilon: Option<f64>,

    #[arg(long)]
    pub gamma: Option<f64>,

    #[arg(long, value_parser = parse_rounding)]
    pub rounding: Option<Rounding>,

    /// `edge` or `node`; solve-node always uses `node`.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,

    /// Overrides the sample count derived from epsilon.
    #[arg(long)]
    pub num_samples: Option<u64>,

    #[arg(long)]
    pub eval_samples: Option<u64>,

    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct KargerArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,

    #[arg(long)]
    pub budget: Option<f64>,

    #[arg(long)]
    pub gamma: Option<f64>,

    #[arg(long)]
    pub lambda: Option<f64>,

    #[arg(long)]
    pub repetitions: Option<u64>,

    #[arg(long)]
    pub eval_samples: Option<u64>,

    /// Failure exponent in the sparsification bound.
    #[arg(long)]
    pub d: Option<f64>,

    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CountPathsArgs {
    /// Count the paths of this edge list exactly.
    #[arg(long, conflicts_with = "model")]
    pub graph: Option<PathBuf>,

    /// Estimate over graphs generated from this Chung-Lu model.
    #[arg(long)]
    pub model: Option<PathBuf>,

    #[arg(long)]
    pub kmax: Option<usize>,

    #[arg(long)]
    pub trials: Option<u64>,

    /// Percolation probability applied to generated graphs.
    #[arg(long)]
    pub p: Option<f64>,

    /// Probability grid for an empirical survival ceiling.
    #[arg(long, value_delimiter = ',')]
    pub sweep: Vec<f64>,

    /// The sweep keeps `Gamma <= n^poly_exponent`.
    #[arg(long, default_value_t = 3.0)]
    pub poly_exponent: f64,

    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    /// N(D, k) by recurrence and enumeration with the closed-form bound.
    Recurrence,
    /// The path-count bound of a model for k = 1..kmax.
    PathBound,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum, default_value = "recurrence")]
    pub table: Table,

    #[arg(long, default_value_t = 8)]
    pub d_max: u32,

    #[arg(long, default_value_t = 8)]
    pub kmax: u32,

    #[arg(long, value_delimiter = ',', default_values_t = [1.1, 1.5, 2.0])]
    pub c1: Vec<f64>,

    #[arg(long, value_delimiter = ',', default_values_t = [1, 2])]
    pub w_min: Vec<u32>,

    /// Model for the path-bound table.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    SaaDet,
    SaaRand,
    Karger,
    Brute,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::SaaDet => "saa-det",
            Algo::SaaRand => "saa-rand",
            Algo::Karger => "karger",
            Algo::Brute => "brute",
        }
    }
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,

    #[arg(long)]
    pub budget: Option<f64>,

    #[arg(long, value_enum, value_delimiter = ',')]
    pub algos: Vec<Algo>,

    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Rounding inflation for the LP algorithms.
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Budget inflation for the sampled-cut algorithm.
    #[arg(long)]
    pub karger_gamma: Option<f64>,

    #[arg(long)]
    pub lambda: Option<f64>,

    #[arg(long)]
    pub repetitions: Option<u64>,

    #[arg(long)]
    pub num_samples: Option<u64>,

    #[arg(long)]
    pub eval_samples: Option<u64>,

    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Exact expected infections by enumeration.
    Exact {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        intervention: InterventionArgs,
    },
    /// Best intervention on a fixed sample set by exhaustive search.
    Brute {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
        #[arg(long)]
        num_samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exact bounded-cut optimum next to the bicriteria sweep.
    Sbcc {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.75])]
        lambda: Vec<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

pub fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "edge" => Ok(Mode::Edge),
        "node" => Ok(Mode::Node),
        _ => Err(format!("expected `edge` or `node`, got `{s}`")),
    }
}

pub fn parse_rounding(s: &str) -> Result<Rounding, String> {
    match s {
        "randomized" => Ok(Rounding::Randomized),
        "deterministic" => Ok(Rounding::Deterministic),
        _ => Err(format!("expected `randomized` or `deterministic`, got `{s}`")),
    }
}
