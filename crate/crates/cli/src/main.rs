//! `hyperfin`: command-line front end for the `hyperfinite` crate.
//!
//! Exit codes: 0 pass, 1 fail, 2 input error, 3 budget or cap exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperfinite::rational::{self, Rational};
use hyperfinite::subsets::DEFAULT_CAP;

mod commands;
mod manifest;

#[derive(Parser, Debug, Clone)]
#[command(name = "hyperfin", version, about = "Hyperfiniteness certificates on finite graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Arithmetic for the LP solvers.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Rational)]
    pub mode: Mode,
    /// Enumeration cap for subsets and minimal separators.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Iteration budget for column generation.
    #[arg(long, global = true, default_value_t = 500)]
    pub budget: usize,
    /// Seed for every random choice; required by randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (stdout if absent). A manifest is written next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Rational,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Float => "float",
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Write a graph (and measure, if the family has one) as JSON.
    Generate(GenerateArgs),
    /// Validate a certificate and compare it against thresholds.
    Certify(CertifyArgs),
    /// Run one transform stage, or the whole chain, on a certificate.
    Transform(TransformArgs),
    /// Separator game value: exact LP or column-generation bracket.
    Game(GameArgs),
    /// Optimal fractional K-partition.
    PartitionLp(PartitionArgs),
    /// CSV of game value, partition LP value and uniform profile per K.
    Profile(ProfileArgs),
    /// Rerun the command recorded in a manifest and compare output digests.
    Replay(ReplayArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cycle,
    Path,
    Grid,
    Torus,
    Tree,
    Complete,
    RandomRegular,
    Hybrid1,
    Hybrid2,
    Cayley,
}

#[derive(Args, Debug, Clone)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Degree of a random regular graph.
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    #[arg(long)]
    pub branching: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Cycle length of a hybrid.
    #[arg(long)]
    pub cycle: Option<usize>,
    /// Gadget size; repeat for several gadgets. Gadget `i` uses seed `seed + i`.
    #[arg(long)]
    pub gadget: Vec<usize>,
    /// Distance between gadget markers (default: cycle length / gadget count).
    #[arg(long)]
    pub spacing: Option<usize>,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub radius: Option<usize>,
    /// Decay rate (default: ln(2·rank)).
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct CertifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub cert: PathBuf,
    #[arg(long, value_parser = parse_rational)]
    pub eps: Option<Rational>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Radius threshold for Reiter families.
    #[arg(long)]
    pub r: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct TransformArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub cert: Option<PathBuf>,
    /// Stage name, e.g. `partition-to-reiter`.
    #[arg(long, conflicts_with = "full", required_unless_present = "full")]
    pub stage: Option<String>,
    /// Reiter family → ... → Reiter family through every stage.
    #[arg(long)]
    pub full: bool,
    #[arg(long, value_parser = parse_rational)]
    pub eps: Option<Rational>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameMethod {
    Exact,
    ColumnGeneration,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Response {
    Exact,
    Greedy,
    LocalSearch,
}

#[derive(Args, Debug, Clone)]
pub struct GameArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = GameMethod::Exact)]
    pub method: GameMethod,
    /// Best-response solver for column generation.
    #[arg(long, value_enum, default_value_t = Response::LocalSearch)]
    pub response: Response,
}

#[derive(Args, Debug, Clone)]
pub struct PartitionArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ProfileArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Comma-separated values and ranges, e.g. `2,3,4,6` or `1-8`.
    #[arg(long, value_parser = parse_k_range)]
    pub k_range: KRange,
    /// Game method; by default exact when the graph is small enough.
    #[arg(long, value_enum)]
    pub method: Option<GameMethod>,
    #[arg(long, value_enum, default_value_t = Response::LocalSearch)]
    pub response: Response,
    /// Subsets drawn by the sampled uniform profile on large graphs.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long)]
    pub no_partition_lp: bool,
    #[arg(long)]
    pub no_uniform: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ReplayArgs {
    /// A `*.manifest.json` sidecar.
    pub manifest: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRange(pub Vec<usize>);

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_k_range(s: &str) -> Result<KRange, String> {
    let mut ks = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad K value {t:?}"));
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range {part}"));
                }
                ks.extend(a..=b);
            }
            None => ks.push(num(part)?),
        }
    }
    if ks.is_empty() || ks.contains(&0) {
        return Err("K values must be positive".into());
    }
    ks.sort_unstable();
    ks.dedup();
    Ok(KRange(ks))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match commands::execute(&cli, argv) {
        Ok(pass) => ExitCode::from(if pass { 0 } else { 1 }),
        Err(e) => {
            eprintln!("hyperfin: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commands::CliError;

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("2,3,4,6").unwrap(), KRange(vec![2, 3, 4, 6]));
        assert_eq!(parse_k_range("1-3,2").unwrap(), KRange(vec![1, 2, 3]));
        assert!(parse_k_range("0").is_err());
        assert!(parse_k_range("3-1").is_err());
        assert!(parse_k_range("x").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::Input("x".into()).exit_code(), 2);
        assert_eq!(CliError::Lib(hyperfinite::Error::ExplosionCap { cap: 1 }).exit_code(), 3);
        assert_eq!(CliError::Lib(hyperfinite::Error::NoValidThreshold).exit_code(), 1);
    }
}
