mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use resdist_core::WeightMode;

/// Exact resistance-distance index for road-like graphs.
#[derive(Debug, Parser)]
#[command(name = "resdist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// `u v [weight]` per line, `#` comments.
    Edges,
    /// DIMACS shortest-path `.gr`.
    Dimacs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Weights {
    /// Weight is an electrical conductance.
    Conductance,
    /// Weight is a resistance (e.g. travel time); conductance is its inverse.
    Resistance,
    /// Ignore weights.
    Unweighted,
}

impl From<Weights> for WeightMode {
    fn from(w: Weights) -> Self {
        match w {
            Weights::Conductance => WeightMode::Conductance,
            Weights::Resistance => WeightMode::Resistance,
            Weights::Unweighted => WeightMode::Unweighted,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Graph file.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Edges)]
    pub format: Format,
    /// Weight interpretation; defaults to conductance for edge lists and
    /// unweighted for DIMACS.
    #[arg(long, value_enum)]
    pub weights: Option<Weights>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decompose a graph, build its labels and write the index file.
    Build {
        #[command(flatten)]
        graph: GraphArgs,
        /// Index file to write.
        #[arg(long, short)]
        output: PathBuf,
        /// Print the stats line as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Resistance queries against an index file.
    #[command(subcommand)]
    Query(QueryCommand),
    /// Unit s-t electrical flow on every edge, as JSON.
    Flow {
        #[arg(long)]
        index: PathBuf,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u64,
    },
    /// Alternative routes peeled off the s-t electrical flow, with metrics.
    Route {
        #[arg(long)]
        index: PathBuf,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Per-edge removal probability for the robustness estimate.
        #[arg(long, default_value_t = 0.001)]
        removal_prob: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = resdist_core::rng::DEFAULT_SEED)]
        seed: u64,
        /// DIMACS `.co` coordinates; adds a GeoJSON FeatureCollection.
        #[arg(long)]
        coords: Option<PathBuf>,
        /// Multiplier applied to raw coordinates (DIMACS stores microdegrees).
        #[arg(long, default_value_t = 1e-6)]
        coord_scale: f64,
    },
    /// Summary of an index or of a graph's decomposition.
    Stats {
        #[arg(long, required_unless_present = "input")]
        index: Option<PathBuf>,
        #[arg(long, short)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Edges)]
        format: Format,
        #[arg(long, value_enum)]
        weights: Option<Weights>,
    },
    /// Check the index against dense reference computations.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Verify this index instead of building one from the graph.
        #[arg(long)]
        index: Option<PathBuf>,
        #[arg(long, default_value_t = 36)]
        pairs: usize,
        #[arg(long, default_value_t = resdist_core::rng::DEFAULT_SEED)]
        seed: u64,
    },
    /// Time random pair and single-source queries.
    Bench {
        #[arg(long)]
        index: PathBuf,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 10)]
        sources: usize,
        #[arg(long, default_value_t = resdist_core::rng::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Debug, Subcommand)]
enum QueryCommand {
    /// r(s,t) as JSON.
    Pair {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u64,
    },
    /// r(s,u) for every node, streamed as `external_id,r` CSV or raw f64.
    Source {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        s: u64,
        /// Output file; CSV goes to stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Little-endian f64 per node in internal id order instead of CSV.
        #[arg(long, requires = "output")]
        binary: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build { graph, output, json } => commands::build(&graph, &output, json),
        Command::Query(QueryCommand::Pair { index, s, t }) => commands::query_pair(&index, s, t),
        Command::Query(QueryCommand::Source { index, s, output, binary }) => {
            commands::query_source(&index, s, output.as_deref(), binary)
        }
        Command::Flow { index, graph, s, t } => commands::flow(&index, &graph, s, t),
        Command::Route { index, graph, s, t, k, removal_prob, trials, seed, coords, coord_scale } => {
            let params = resdist_core::MetricParams { removal_prob, trials, seed };
            commands::route(&index, &graph, s, t, k, params, coords.as_deref(), coord_scale)
        }
        Command::Stats { index, input, format, weights } => {
            let graph = input.map(|input| GraphArgs { input, format, weights });
            commands::stats(index.as_deref(), graph.as_ref())
        }
        Command::Verify { graph, index, pairs, seed } => commands::verify(&graph, index.as_deref(), pairs, seed),
        Command::Bench { index, pairs, sources, seed, threads } => {
            commands::bench(&index, pairs, sources, seed, threads)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
