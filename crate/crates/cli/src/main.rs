mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "coarse-l1",
    version,
    about = "Low-diameter decompositions and multi-scale L1 embeddings of graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph instance as a text edge list
    Generate(GenerateArgs),
    /// Run one residue or annulus decomposition
    Decompose(DecomposeArgs),
    /// Sample the multi-scale embedding and write a coordinate dump
    Embed(EmbedArgs),
    /// Check a coordinate dump against the graph and emit its distortion profile
    Verify(VerifyArgs),
    /// Run the exhaustion process on the proximity graph of a graph metric
    Certify(CertifyArgs),
    /// Search the cut parameters (s, t, n) for a constant D and minor order r
    Params(ParamsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FamilyName {
    Path,
    Cycle,
    Grid2d,
    #[value(alias = "random_tree")]
    RandomTree,
    #[value(alias = "series_parallel")]
    SeriesParallel,
    Hypercube,
    #[value(alias = "random_regular")]
    RandomRegular,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// Vertex count (path, cycle, random_tree, series_parallel, random_regular)
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Hypercube dimension
    #[arg(long)]
    pub dim: Option<u32>,
    /// Degree of a random regular graph
    #[arg(long)]
    pub degree: Option<usize>,
    /// Required for random families
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Residue,
    Annulus,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ConventionArg {
    Literal,
    SkipLeader,
}

impl From<ConventionArg> for coarse_l1::decomposition::ResidueConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Literal => Self::Literal,
            ConventionArg::SkipLeader => Self::SkipLeader,
        }
    }
}

#[derive(Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "residue")]
    pub variant: VariantArg,
    /// Residue scale Δ (the annulus variant uses t + 2s)
    #[arg(long)]
    pub delta: Option<u32>,
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Draw residue offsets from this seed
    #[arg(long, conflicts_with = "offsets")]
    pub seed: Option<u64>,
    /// Fixed residue offsets, e.g. 2,1
    #[arg(long, value_delimiter = ',')]
    pub offsets: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value = "literal")]
    pub convention: ConventionArg,
    /// Annulus half-width
    #[arg(long)]
    pub s: Option<u32>,
    /// Annulus gap
    #[arg(long)]
    pub t: Option<u32>,
    /// Vertex measure for the annulus variant (uniform when omitted)
    #[arg(long)]
    pub measure: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct EmbedArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Decomposition rounds r
    #[arg(long)]
    pub rounds: usize,
    /// Largest scale index; defaults to ceil(log2 diam) + 1
    #[arg(long)]
    pub i_max: Option<u32>,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    /// Base vertex O
    #[arg(long, default_value_t = 0)]
    pub base: usize,
    #[arg(long, value_enum, default_value = "literal")]
    pub convention: ConventionArg,
    /// Coordinate dump (CSV)
    #[arg(long)]
    pub out: PathBuf,
    /// Report JSON (stdout when omitted)
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Coordinate dump written by `embed`
    #[arg(long)]
    pub embedding: PathBuf,
    /// Embed report; enables regeneration, magnitude and partition checks
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Count magnitude violations toward the exit status
    #[arg(long)]
    pub strict_magnitude: bool,
    /// Profile JSON (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Profile as CSV rows t,rho1,rho2
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Exhaustive,
    Balls,
    Sweep,
}

impl From<StrategyArg> for coarse_l1::analysis::Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Exhaustive => Self::Exhaustive,
            StrategyArg::Balls => Self::Balls,
            StrategyArg::Sweep => Self::Sweep,
        }
    }
}

#[derive(Args)]
pub struct CertifyArgs {
    /// Graph whose shortest-path metric is used
    #[arg(long)]
    pub graph: PathBuf,
    /// JSON measure: {"weights": [...]} or {"pairs": [[x, y, w], ...]}
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long)]
    pub s: u32,
    /// Diameter threshold T
    #[arg(long)]
    pub threshold: f64,
    #[arg(long)]
    pub phi: f64,
    #[arg(long, value_enum, default_value = "sweep")]
    pub strategy: StrategyArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ParamsArgs {
    /// The constant D
    #[arg(long = "d", allow_negative_numbers = true)]
    pub d: f64,
    /// Minor order r
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Decompose(a) => commands::decompose(a),
        Command::Embed(a) => commands::embed(a),
        Command::Verify(a) => commands::verify(a),
        Command::Certify(a) => commands::certify(a),
        Command::Params(a) => commands::params(a),
    };
    match result {
        Ok(commands::Outcome::Ok) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
