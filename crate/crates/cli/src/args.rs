use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "attnet",
    version,
    about = "Attitude network simulations and election survey analyses"
)]
pub struct Cli {
    /// Worker threads for replicate and candidate jobs.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the simulation study over generator and weight combinations.
    Simulate(SimulateArgs),
    /// Build candidate networks from survey data and test both hypotheses.
    Analyze(AnalyzeArgs),
    /// Leave-one-election-out forecasts of element impact from closeness.
    Forecast(ForecastArgs),
    /// Write synthetic election data with known generating models.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON study config; flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Graph generator name or `all`.
    #[arg(long)]
    pub generator: Option<String>,
    /// Weight distribution name or `all`.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub replicates: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub variations: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub individuals: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    pub nodes: Option<u64>,
    /// Ising sampler name.
    #[arg(long)]
    pub sampler: Option<String>,
    /// Keep every variation in the replicate records.
    #[arg(long)]
    pub keep_variations: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write scatters for the replicate nearest each combination mean.
    #[arg(long)]
    pub svg: bool,
    #[arg(long, default_value = "attnet-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Survey CSV.
    pub input: PathBuf,
    /// One of voters, all, against, independents.
    #[arg(long, default_value = "voters")]
    pub filter: String,
    #[arg(long)]
    pub svg: bool,
    #[arg(long, default_value = "attnet-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PoolingArg {
    Pooled,
    PerCandidate,
}

#[derive(Debug, Args)]
pub struct ForecastArgs {
    /// Survey CSV.
    pub input: PathBuf,
    #[arg(long, default_value = "voters")]
    pub filter: String,
    /// Election to forecast; every election in turn when omitted.
    #[arg(long)]
    pub target: Option<String>,
    /// JSON object mapping element columns to canonical element names.
    #[arg(long)]
    pub element_map: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pooled")]
    pub pooling: PoolingArg,
    #[arg(long, default_value = "attnet-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// JSON synthetic suite spec; flags override its counts.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub elections: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub candidates: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub respondents: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "attnet-out")]
    pub out: PathBuf,
}
