use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "unimoment",
    version,
    about = "Exact moments, cumulants and unit-circle roots of probability generating polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List or generate polynomial families.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Exact moment/cumulant report, optionally with unit-circle roots.
    Analyze(AnalyzeArgs),
    /// Fourth-moment gap and cumulant condition along a parameter schedule.
    Sweep(SweepArgs),
    /// Limit-law readout: jump function, q and q_k, limit moments.
    Limit(LimitArgs),
    /// PMF data with an optional matched normal overlay, for plotting.
    Pmf(PmfArgs),
}

#[derive(Subcommand, Debug)]
pub enum FamilyCommand {
    /// Print the family names and their parameters.
    List,
    /// Generate one family member: `family gen NAME --n 3 [--out json|csv]`.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub name: String,
    /// Family parameters as `--key value`, plus `--out json|csv`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, num_args = 0.., value_name = "--PARAM VALUE")]
    pub rest: Vec<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Overlay {
    Normal,
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("source").required(true).args(["coeffs", "file", "family"])))]
pub struct InputArgs {
    /// Comma-separated coefficients, low degree first (`1,2,2,1` or `1/2,1/2`).
    #[arg(long)]
    pub coeffs: Option<String>,
    /// JSON array of rational strings, a `family gen` JSON report, or a
    /// comma-separated line; `-` reads standard input.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Family name (see `family list`).
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameters, `n=10,k=2`; lists use `:` (`a=3:2:1`).
    #[arg(long, requires = "family", allow_hyphen_values = true)]
    pub params: Option<String>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Highest cumulant order to report.
    #[arg(long, default_value_t = 4)]
    pub cumulants: usize,
    /// Working precision in bits for root extraction.
    #[arg(long)]
    pub precision: Option<u32>,
    /// Extract and verify unit-circle roots.
    #[arg(long)]
    pub roots: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub family: String,
    /// Rows separated by `;`, each a parameter list: `n=8,k=4;n=16,k=8`.
    #[arg(long)]
    pub schedule: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub out: Format,
    /// Also extract roots per row and report the largest jump.
    #[arg(long)]
    pub angles: bool,
    #[arg(long)]
    pub precision: Option<u32>,
    /// With CSV output, also write the exact JSON report to this path.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Number of jump masses q_k to report.
    #[arg(long, default_value_t = 5)]
    pub topk: usize,
    #[arg(long)]
    pub precision: Option<u32>,
}

#[derive(Args, Debug)]
pub struct PmfArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub overlay: Option<Overlay>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub out: Format,
    #[arg(long)]
    pub precision: Option<u32>,
    /// With CSV output, also write the exact JSON report to this path.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}
