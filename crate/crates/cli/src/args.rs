use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "apseq",
    version,
    about = "Arithmetic progressions in orderings of finite sets and groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count progression k-orderings of a set.
    Count(CountArgs),
    /// Longest progression subsequence of one ordering.
    Las(LasArgs),
    /// Exact distribution of the longest progression over all orderings.
    Enumerate(EnumerateArgs),
    /// Solve the threshold equation for a set family.
    Predict(PredictArgs),
    /// Monte Carlo experiments on uniformly random orderings.
    Simulate(SimulateArgs),
    /// Left and right progression counts in a dihedral group.
    Nonabelian(NonabelianArgs),
    /// Regenerate the interval or cyclic table and diff it against the golden copy.
    Tables(TablesArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Count(_) => "count",
            Command::Las(_) => "las",
            Command::Enumerate(_) => "enumerate",
            Command::Predict(_) => "predict",
            Command::Simulate(_) => "simulate",
            Command::Nonabelian(_) => "nonabelian",
            Command::Tables(_) => "tables",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Closed,
    Brute,
    Bounds,
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    /// Set specification, e.g. interval:10,2 or abelian:2x4.
    #[arg(long)]
    pub set: String,
    #[arg(long)]
    pub k: u64,
    #[arg(long, value_enum, default_value_t = CountMethod::Closed)]
    pub method: CountMethod,
    #[arg(long)]
    #[serde(skip)]
    pub json: bool,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("input").required(true).args(["sequence", "coords"])))]
pub struct LasArgs {
    #[arg(long)]
    pub set: String,
    /// Comma-separated ordering. One-dimensional sets take the elements
    /// themselves; higher-dimensional sets take canonical indices.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<i64>>,
    /// Semicolon-separated coordinate tuples, e.g. "1,1;1,2;2,1;2,2".
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coords: Option<String>,
    /// Report a witness progression with its positions.
    #[arg(long)]
    pub witness: bool,
    #[arg(long)]
    #[serde(skip)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineArg {
    Incremental,
    Direct,
}

#[derive(Debug, Args, Serialize)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub set: String,
    /// Worker threads; also lifts the size limit to 12.
    #[arg(long)]
    #[serde(skip)]
    pub parallel: Option<usize>,
    /// Write the row as CSV to this file.
    #[arg(long)]
    #[serde(skip)]
    pub csv: Option<PathBuf>,
    /// Cache directory; defaults to $APSEQ_CACHE_DIR when set.
    #[arg(long, env = "APSEQ_CACHE_DIR")]
    #[serde(skip)]
    pub cache: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = EngineArg::Incremental)]
    pub engine: EngineArg,
    /// Visit every ordering instead of one per symmetry orbit.
    #[arg(long)]
    pub no_symmetry: bool,
    #[arg(long)]
    #[serde(skip)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Interp,
    Smooth,
}

#[derive(Debug, Args, Serialize)]
pub struct PredictArgs {
    #[arg(long)]
    pub set: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Interp)]
    pub mode: ModeArg,
    #[arg(long)]
    #[serde(skip)]
    pub json: bool,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("experiment").args(["k", "coverage", "histogram"])))]
#[command(group(ArgGroup::new("format").args(["json", "csv"])))]
pub struct SimulateArgs {
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
    /// Estimate the mean number of k-term progression subsequences.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Fraction of samples whose longest progression lies in the predicted window.
    #[arg(long)]
    pub coverage: bool,
    /// Histogram of the longest progression (the default experiment).
    #[arg(long)]
    pub histogram: bool,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[arg(long)]
    #[serde(skip)]
    pub json: bool,
    #[arg(long)]
    #[serde(skip)]
    pub csv: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct NonabelianArgs {
    /// Group specification, dihedral:n for the group of order 2n.
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    #[serde(skip)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFamily {
    Interval,
    Cyclic,
}

#[derive(Debug, Args, Serialize)]
pub struct TablesArgs {
    #[arg(long, value_enum)]
    pub family: TableFamily,
    #[arg(long, default_value_t = 9)]
    pub max_n: usize,
    /// Worker threads; needed for rows above 10.
    #[arg(long)]
    #[serde(skip)]
    pub parallel: Option<usize>,
    /// Also write the regenerated CSV to this file.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}
