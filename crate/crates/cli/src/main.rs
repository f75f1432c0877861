//! `complements`: build and inspect additive complements of sparse sets.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sparse_complements::ErrorKind;

#[derive(Parser)]
#[command(name = "complements", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Greedily build A with d(A + B) = alpha.
    Construct(ConstructArgs),
    /// Build A with lower density alpha and upper density beta for A + B.
    Oscillate(OscillateArgs),
    /// Test whether B looks highly sparse on the horizon.
    VerifySparse(VerifyArgs),
    /// Generate the highly sparse set determined by a pair of rates.
    MakeSparse(MakeArgs),
    /// Density profile of A + B for a set file A.
    Analyze(AnalyzeArgs),
}

/// Where the sparseness rates of B come from.
#[derive(Args, Clone, Default)]
struct RateSource {
    /// Rates file (`f = ...`, `g = ...`, optional `certified_from = N`).
    #[arg(long, value_name = "FILE", conflicts_with = "derive_rates")]
    rates: Option<PathBuf>,
    /// Derive rates from the gaps of B (uncertified; checked on the horizon).
    #[arg(long)]
    derive_rates: bool,
}

#[derive(Args)]
struct ConstructArgs {
    /// Target density as p/q.
    #[arg(long)]
    alpha: String,
    /// Generator spec for B.
    #[arg(long)]
    b: String,
    #[arg(long)]
    horizon: u64,
    #[command(flatten)]
    rates: RateSource,
    /// Profile sample stride (default H/100).
    #[arg(long)]
    stride: Option<u64>,
    /// Set file for A.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV density profile of A + B.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// JSON greedy trace.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct OscillateArgs {
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    #[arg(long)]
    b: String,
    /// Set file for C; defaults to the greedy complement with density beta.
    #[arg(long, value_name = "FILE")]
    c: Option<PathBuf>,
    #[arg(long)]
    horizon: u64,
    #[command(flatten)]
    rates: RateSource,
    #[arg(long)]
    stride: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV `k,parity,n_k,ratio`.
    #[arg(long)]
    checkpoints: Option<PathBuf>,
    #[arg(long)]
    profile: Option<PathBuf>,
    /// JSON report with the dip witnesses.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    b: String,
    #[arg(long)]
    horizon: u64,
    /// Ratio bounds M for the ratio test, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,10,100")]
    m_targets: Vec<String>,
    /// Rates file for the gap check.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["f", "g"])]
    rates: Option<PathBuf>,
    /// Rate expression f (with --g).
    #[arg(long, requires = "g")]
    f: Option<String>,
    /// Rate expression g (with --f).
    #[arg(long, requires = "f")]
    g: Option<String>,
    /// Values of a for the gap check, as lo:hi (default: every a whose window fits).
    #[arg(long)]
    a_range: Option<String>,
    /// JSON verdicts.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct MakeArgs {
    #[arg(long, value_name = "FILE", conflicts_with_all = ["f", "g"], required_unless_present = "f")]
    rates: Option<PathBuf>,
    #[arg(long, requires = "g")]
    f: Option<String>,
    #[arg(long, requires = "f")]
    g: Option<String>,
    #[arg(long)]
    horizon: u64,
    /// Set file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Set file for A.
    #[arg(long)]
    set: PathBuf,
    /// Treat the set file as the whole of A rather than A up to its horizon.
    #[arg(long)]
    finite: bool,
    #[arg(long)]
    b: String,
    #[arg(long)]
    horizon: u64,
    #[arg(long)]
    stride: Option<u64>,
    /// Start of the tail window (default ceil(H/2)).
    #[arg(long)]
    tail_from: Option<u64>,
    /// CSV output (default: standard output).
    #[arg(long)]
    profile: Option<PathBuf>,
}

/// How a successful run ended.
pub enum Outcome {
    Done,
    NegativeVerdict,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Oscillate(a) => commands::oscillate(a),
        Command::VerifySparse(a) => commands::verify_sparse(a),
        Command::MakeSparse(a) => commands::make_sparse(a),
        Command::Analyze(a) => commands::analyze(a),
    };
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NegativeVerdict) => ExitCode::from(5),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Infeasible => 3,
                ErrorKind::Exhausted => 4,
            })
        }
    }
}
