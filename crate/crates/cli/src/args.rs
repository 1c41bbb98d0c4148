use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "kaya-lmdi",
    version,
    about = "LMDI decomposition of emissions over a Kaya factor chain"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a dataset without writing anything
    Validate(ValidateArgs),
    /// Decompose a dataset and write a report
    Decompose(DecomposeArgs),
    /// Write a waterfall chart for one period
    Chart(ChartArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuiltinChain {
    /// C = C/F * F/E * E/G * G/P * P
    Kaya5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Annual,
    #[value(name = "base-year", alias = "base_year")]
    BaseYear,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Reject,
    Substitute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ChainOpts {
    /// Built-in factor chain
    #[arg(long, value_enum, default_value_t = BuiltinChain::Kaya5, conflicts_with = "chain_file")]
    pub chain: BuiltinChain,

    /// Custom chain spec file (name, aggregate and `factor` lines)
    #[arg(long, value_name = "PATH")]
    pub chain_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PolicyOpts {
    /// Handling of zero or negative indicator values
    #[arg(long, value_enum, default_value_t = PolicyArg::Reject)]
    pub zero_policy: PolicyArg,

    /// Substitute value for the `substitute` policy [default: 1e-20]
    #[arg(long, value_name = "DELTA")]
    pub delta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Dataset CSV
    pub input: PathBuf,
    #[command(flatten)]
    pub chain: ChainOpts,
    #[command(flatten)]
    pub policy: PolicyOpts,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Dataset CSV
    pub input: PathBuf,

    /// Report path. With `--mode both`, `.annual` and `.base_year` are
    /// inserted before the extension.
    #[arg(short, long, value_name = "PATH")]
    pub output: PathBuf,

    #[arg(long, value_enum, default_value_t = ModeArg::Annual)]
    pub mode: ModeArg,

    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,

    /// Waterfall SVG for the first-to-last (cumulative) pair
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,

    /// Directory for one waterfall SVG per reported period
    #[arg(long, value_name = "DIR")]
    pub svg_dir: Option<PathBuf>,

    #[command(flatten)]
    pub chain: ChainOpts,
    #[command(flatten)]
    pub policy: PolicyOpts,
}

#[derive(Debug, Args)]
pub struct ChartArgs {
    /// Dataset CSV
    pub input: PathBuf,

    /// SVG path
    #[arg(short, long, value_name = "PATH")]
    pub output: PathBuf,

    /// Start year [default: first year]
    #[arg(long)]
    pub from: Option<i32>,

    /// End year [default: last year]
    #[arg(long)]
    pub to: Option<i32>,

    #[command(flatten)]
    pub chain: ChainOpts,
    #[command(flatten)]
    pub policy: PolicyOpts,
}
