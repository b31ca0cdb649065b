use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hadwalk",
    version,
    about = "Exact counts, envelopes and checks for partial Hadamard matrices via their lattice walk"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the output here instead of stdout (replaced atomically).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// key=value file supplying defaults for any flag not given.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Add elapsed wall time to the records.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count n x t partial Hadamard matrices.
    Count(CountArgs),
    /// Run named verification suites.
    Verify(VerifyArgs),
    /// Sweep (n, t) and tabulate counts against envelopes.
    Table(TableArgs),
    /// Envelopes U, L and the normalization at one (n, t).
    Bounds(BoundsArgs),
    /// Abundance and existence thresholds.
    Threshold(ThresholdArgs),
    /// Integrate powers of the characteristic function.
    Integrate(IntegrateArgs),
    /// Simulate the walk.
    Simulate(SimulateArgs),
    /// List the unit-modulus set.
    Lambda(LambdaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Dp,
    Closed,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reading {
    Central,
    Pair,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Rows; a value or a range a:b[:s].
    #[arg(long)]
    pub n: Option<String>,
    /// Columns; a value or a range a:b[:s].
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Binomial used by the n = 2 closed form.
    #[arg(long, value_enum)]
    pub n2_reading: Option<Reading>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// lambda, charfn, sandwich, appendix, exact, integral, walk or all.
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub t: Option<String>,
    /// Skip the brute-force column.
    #[arg(long)]
    pub no_brute: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Step count, a positive multiple of 4.
    #[arg(long)]
    pub t: Option<usize>,
    /// A single delta; without it the default grid is used.
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegralKind {
    Grid,
    Mc,
    Midpoint,
    Residual,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<IntegralKind>,
    /// Box radius for mc and midpoint, residual cut for residual.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub samples: Option<u64>,
    /// Midpoint nodes per axis.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub chains: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Check the first three moments of one increment instead.
    #[arg(long)]
    pub moments: bool,
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Cardinalities and the value multiset instead of the point list.
    #[arg(long)]
    pub summary: bool,
}
