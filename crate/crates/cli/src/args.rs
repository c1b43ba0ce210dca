use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use readk::Tail;

/// Tail bounds, exact tails and inequality audits for read-k families.
#[derive(Debug, Parser)]
#[command(name = "readk", version)]
pub struct Cli {
    /// Print aligned tables instead of JSON lines.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the read-k tail bound (or its quadratic relaxation).
    Bound(BoundArgs),
    /// Exact law of the sum, optionally with one tail probability.
    Exact(ExactArgs),
    /// Monte Carlo estimate of a tail probability.
    Mc(McArgs),
    /// Compare exact tails with the bound at every threshold; exit 1 on a violation.
    Verify(VerifyArgs),
    /// Evaluate every step of the entropy argument for one tail event.
    Trace(EventArgs),
    /// Shearer's lemma and its divergence form on the conditioned law.
    Shearer(EventArgs),
    /// Write a benchmark family.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TailArg {
    Upper,
    Lower,
}

impl From<TailArg> for Tail {
    fn from(t: TailArg) -> Self {
        match t {
            TailArg::Upper => Tail::Upper,
            TailArg::Lower => Tail::Lower,
        }
    }
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("deviation").required(true).args(["eps", "t"]))]
pub struct BoundArgs {
    /// Number of functions.
    #[arg(long)]
    pub r: u64,
    /// Read width.
    #[arg(long)]
    pub k: u64,
    /// Average marginal.
    #[arg(long)]
    pub p: f64,
    /// Deviation of the mean fraction.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Raw threshold on the sum; eps = t/r - p (upper) or p - t/r (lower).
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, value_enum)]
    pub tail: TailArg,
    /// Report exp(-2 eps^2 r / k) instead.
    #[arg(long)]
    pub simplified: bool,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    pub file: PathBuf,
    #[arg(long, requires = "tail")]
    pub t: Option<f64>,
    #[arg(long, value_enum, requires = "t")]
    pub tail: Option<TailArg>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub t: f64,
    #[arg(long, value_enum)]
    pub tail: TailArg,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    /// Relative tolerance on exact <= bound.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Marginal used in the bound; defaults to the exact average marginal.
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EventArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub t: f64,
    #[arg(long, value_enum)]
    pub tail: TailArg,
    /// Relative tolerance on each inequality.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    BlockTight,
    Random,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,
    /// Read width (both presets).
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of blocks (block-tight).
    #[arg(long)]
    pub blocks: Option<usize>,
    /// Bernoulli parameter as a fraction or short decimal (block-tight).
    #[arg(long)]
    pub p: Option<String>,
    /// Number of variables (random).
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of functions (random).
    #[arg(long)]
    pub r: Option<usize>,
    /// Largest function arity (random).
    #[arg(long, default_value_t = 3)]
    pub max_arity: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random rational weights instead of uniform variables (random).
    #[arg(long)]
    pub weighted: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
