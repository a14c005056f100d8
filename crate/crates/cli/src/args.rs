use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "avoidkit", version, about = "Avoidance couplings of two random walkers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a graph from a named family as an edge list.
    Gen(GenArgs),
    /// Report structure, forbidden subgraphs and which engine applies.
    Analyze(AnalyzeArgs),
    /// Print the integer transport for one configuration.
    Transport(TransportArgs),
    /// Run a coupling engine and write its trajectory.
    Simulate(SimulateArgs),
    /// Check a trajectory for avoidance and faithfulness.
    Verify(VerifyArgs),
    /// Exhaustive checks of the counting inequalities behind the transports.
    Oracle(OracleArgs),
    /// Monte-Carlo experiments.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// cycle, complete, complete_bipartite, petersen, heawood, circulant,
    /// configuration_model or random_regular
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Degree; second part size for complete_bipartite.
    #[arg(long, default_value_t = 0)]
    pub d: usize,
    /// Circulant offsets, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub offsets: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub connected: bool,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TransportMode {
    Auto,
    Regular,
    Squarefree,
}

#[derive(Debug, Args)]
pub struct TransportArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub a: usize,
    #[arg(long)]
    pub b: usize,
    /// Excluded vertex; required by the regular transport.
    #[arg(long)]
    pub e: Option<usize>,
    #[arg(long, value_enum, default_value_t = TransportMode::Auto)]
    pub mode: TransportMode,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub ticks: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// auto, cubic, regular, squarefree or cycle
    #[arg(long)]
    pub engine: Option<String>,
    #[arg(long)]
    pub walkers: Option<usize>,
    #[arg(long)]
    pub a0: Option<usize>,
    /// auto, excluded, or a vertex
    #[arg(long)]
    pub b0: Option<String>,
    #[arg(long)]
    pub cache_capacity: Option<usize>,
    /// Trajectory file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// JSON summary file.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub graph: PathBuf,
    pub trajectory: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub min_departures: Option<u64>,
    /// JSON report file.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Violations listed in the text report.
    #[arg(long, default_value_t = 20)]
    pub max_listed: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(subcommand)]
    pub which: OracleCommand,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Regular transport inequality over all subsets of mover pairs.
    Lemma34 {
        graph: PathBuf,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        e: Option<usize>,
        /// Random subsets instead of all of them.
        #[arg(long)]
        sampled: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Square-free transport inequality over all subsets of N(a).
    Lemma42 {
        graph: PathBuf,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Agreement of three forms of H_d-freeness.
    Lemma31 {
        graph: PathBuf,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[command(subcommand)]
    pub which: ExperimentCommand,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// Frequency of the forbidden subgraph in configuration-model samples.
    Prevalence {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        d: usize,
        /// Vertex counts, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Also sample simple connected graphs by rejection.
        #[arg(long)]
        simple_connected: bool,
        #[arg(long)]
        budget: Option<u64>,
        /// CSV file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// JSON file for loop, multi-edge and rejection tallies.
        #[arg(long)]
        tally: Option<PathBuf>,
    },
}
