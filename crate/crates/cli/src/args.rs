use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use wcs_qrng::sweep::Spacing;
use wcs_qrng::SourceModel;

/// Environment variable naming the optional configuration file.
pub const CONFIG_ENV: &str = "WCSQRNG_CONFIG";

#[derive(Debug, Parser)]
#[command(
    name = "wcs-qrng",
    version,
    about = "Weak-coherent-source QRNG modelling, simulation and testing"
)]
pub struct Cli {
    /// key=value configuration file; command-line flags take precedence
    #[arg(long, global = true, env = CONFIG_ENV, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate analytic P_gen, P_disc, P_none and contrast over μη
    Sweep(SweepArgs),
    /// Locate the μη that maximises P_gen
    Optimum(OptimumArgs),
    /// Simulate the generator and write a bit file
    Generate(GenerateArgs),
    /// Run the statistical test battery on a bit file
    Test(TestArgs),
    /// Re-render a stored sweep table, test report or bit file
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "csv" => Ok(Self::Csv),
            "text" => Ok(Self::Text),
            other => Err(format!("unknown format '{other}' (expected csv or text)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Text => "text",
        })
    }
}

/// `lin` or `log`.
pub fn parse_spacing(s: &str) -> Result<Spacing, String> {
    match s.trim() {
        "lin" | "linear" => Ok(Spacing::Linear),
        "log" | "logarithmic" => Ok(Spacing::Logarithmic),
        other => Err(format!("unknown spacing '{other}' (expected lin or log)")),
    }
}

#[derive(Debug, Default, Args)]
pub struct Output {
    /// Write to this file instead of standard output
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_name = "csv|text")]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Source models, comma-separated or repeated (default: single,indist)
    #[arg(long, value_delimiter = ',', value_name = "SOURCE")]
    pub source: Vec<SourceModel>,
    /// Evaluate exactly these μη values instead of a grid
    #[arg(long = "mu-eta", value_delimiter = ',', value_name = "X")]
    pub mu_eta: Vec<f64>,
    /// Lower end of the μη grid
    #[arg(long, value_name = "X")]
    pub min: Option<f64>,
    /// Upper end of the μη grid
    #[arg(long, value_name = "X")]
    pub max: Option<f64>,
    /// Number of grid points
    #[arg(long, value_name = "N")]
    pub points: Option<usize>,
    /// Grid spacing
    #[arg(long, value_name = "lin|log", value_parser = parse_spacing)]
    pub spacing: Option<Spacing>,
    /// Poisson tail mass the Fock expansion may drop
    #[arg(long = "tail-mass", value_name = "P")]
    pub tail_mass: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct OptimumArgs {
    /// Source models, comma-separated or repeated (default: single,indist)
    #[arg(long, value_delimiter = ',', value_name = "SOURCE")]
    pub source: Vec<SourceModel>,
    /// Lower end of the search bracket
    #[arg(long, value_name = "X")]
    pub min: Option<f64>,
    /// Upper end of the search bracket
    #[arg(long, value_name = "X")]
    pub max: Option<f64>,
    /// Poisson tail mass the Fock expansion may drop
    #[arg(long = "tail-mass", value_name = "P")]
    pub tail_mass: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Source model (default: indist)
    #[arg(long, value_name = "SOURCE")]
    pub source: Option<SourceModel>,
    /// Mean photon number per gate before detection
    #[arg(long, value_name = "MU", conflicts_with = "mu_eta")]
    pub mu: Option<f64>,
    /// Detected mean μη; μ is derived using the mean of the two efficiencies
    /// (default: the source's optimum)
    #[arg(long = "mu-eta", value_name = "X")]
    pub mu_eta: Option<f64>,
    /// Efficiency of the bit-0 detector
    #[arg(long, value_name = "ETA")]
    pub eta0: Option<f64>,
    /// Efficiency of the bit-1 detector
    #[arg(long, value_name = "ETA")]
    pub eta1: Option<f64>,
    /// Number of gates to simulate (default: 1000000)
    #[arg(long, value_name = "N", conflicts_with = "bits")]
    pub gates: Option<u64>,
    /// Simulate until this many output bits exist
    #[arg(long, value_name = "N")]
    pub bits: Option<u64>,
    /// Seed of the deterministic random stream
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
    /// Apply von Neumann extraction to the raw bits
    #[arg(long)]
    pub debias: bool,
    /// Gate rate in Hz used for throughput figures
    #[arg(long = "gate-rate", value_name = "HZ")]
    pub gate_rate: Option<f64>,
    /// Write the bits as ASCII '0'/'1' instead of the binary bit file
    #[arg(long)]
    pub ascii: bool,
    /// Also write the per-gate event byte stream here
    #[arg(long, value_name = "PATH")]
    pub events: Option<PathBuf>,
    /// Bit file to write
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Format of the summary printed on standard output
    #[arg(long, value_name = "csv|text")]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Bit file (binary or ASCII)
    pub input: PathBuf,
    /// Bits per tested block (default: min(10^6, input length))
    #[arg(long = "block-size", value_name = "N")]
    pub block_size: Option<usize>,
    /// Significance level
    #[arg(long, value_name = "P")]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Sweep CSV, test report CSV or bit file
    pub input: PathBuf,
    #[command(flatten)]
    pub output: Output,
}
