use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "frate", version, about = "Spectral points, refinements and F-rates over ambiguous alphabets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Value of a spectral point of a graph.
    Spectral(SpectralArgs),
    /// F-rate brackets of a Markov source for block lengths 1..=k-max.
    Frate(ScanArgs),
    /// Typical-subset minimisation scan over n and c.
    AepScan(AepScanArgs),
    /// Pullback identities of an observation.
    Pullback(PullbackArgs),
    /// Ornstein distances between the marginals of two chains.
    Ornstein(OrnsteinArgs),
    /// Entropy rate and stationary law of a chain.
    EntropyRate(ChainArgs),
    /// Sample words from a chain.
    Sample(SampleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Point {
    Alpha,
    Theta,
    Fcc,
}

impl Point {
    pub fn name(self) -> &'static str {
        match self {
            Point::Alpha => "alpha",
            Point::Theta => "theta",
            Point::Fcc => "fcc",
        }
    }
}

#[derive(Args, Debug)]
pub struct SpectralArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "fcc")]
    pub point: Point,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// Flags shared by `frate` and `aep-scan`; each overrides the matching
/// field of `--config`.
#[derive(Args, Debug)]
pub struct ScanArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub chain: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub point: Option<Point>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Mass thresholds, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub c: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub seed: Option<Vec<u64>>,
    /// Directory for the CSV and JSON outputs.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest strong power `|V|^n` a run may touch.
    #[arg(long)]
    pub cap_vertices: Option<u64>,
    /// Format printed to stdout.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct AepScanArgs {
    #[command(flatten)]
    pub scan: ScanArgs,
    /// Also write `scan.svg` into the output directory.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Args, Debug)]
pub struct PullbackArgs {
    #[arg(long)]
    pub obs: PathBuf,
    #[arg(long, value_enum, default_value = "fcc")]
    pub point: Point,
    /// Law on the hidden states for the refinement identity (uniform if
    /// absent, stationary law of `--chain` if that is given).
    #[arg(long)]
    pub dist: Option<PathBuf>,
    /// Chain on the hidden states; enables the hidden-process cross-check
    /// when the observed graph is edgeless.
    #[arg(long)]
    pub chain: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    pub k_max: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct OrnsteinArgs {
    /// Chain file; give the flag twice, both chains over the same states.
    #[arg(long, required = true)]
    pub chain: Vec<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub n_max: usize,
    /// Confusability graph on the states; adds the continuity check.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Directory for the coupling CSV of the longest word length.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[arg(long)]
    pub chain: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub chain: PathBuf,
    /// Word length.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of words; word `i` uses seed `seed + i`.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
}
