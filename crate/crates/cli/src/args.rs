use clap::{Args, Parser, Subcommand, ValueEnum};

use ramroot_core::ScalarMode;

#[derive(Debug, Parser)]
#[command(name = "ramroot", version, about = "Generalized Ramanujan root approximation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate the order-n method to a root.
    Solve(SolveArgs),
    /// Convergents of orders 1..=nmax from a single point.
    Converge(ConvergeArgs),
    /// Convergents P_k/P_(k+1) of A_1 z + A_2 z^2 + ... = 1.
    Series(SeriesArgs),
    /// Regenerate one of the reference tables.
    Tables(TablesArgs),
    /// Empirical order of convergence for a range of n.
    Order(OrderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Float,
    Rational,
}

impl From<Mode> for ScalarMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Float => ScalarMode::Float,
            Mode::Rational => ScalarMode::Rational,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Registered problem (cubic_2_5, exp3, sin_half, cos_fixed, sqrt2) or a
    /// family: `sqrt`/`root` (z^m - a), `log` (log(1+z) - a), `logvalue` (e^z - b).
    #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
    pub problem: Option<String>,
    /// Inline polynomial, ascending coefficients such as `-2,0,1` for z^2 - 2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub poly: Option<Vec<String>>,
    /// Starting point; overrides the problem default.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Root degree for the `root` family (`sqrt` fixes 2).
    #[arg(long)]
    pub m: Option<u32>,
    /// Radicand for `sqrt`/`root`, or the right-hand side for `log`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Integer start for `sqrt`/`root`.
    #[arg(long)]
    pub c: Option<i64>,
    /// Argument of the logarithm for `logvalue`.
    #[arg(long)]
    pub b: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Decimal places in rendered values.
    #[arg(long, default_value_t = 14)]
    pub digits: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value_t = Mode::Float)]
    pub mode: Mode,
    #[arg(long, short = 'n')]
    pub order: usize,
    #[arg(long, default_value_t = ramroot_core::ramanujan::DEFAULT_MAX_ITERATIONS)]
    pub max_iter: usize,
    /// Stop once |f(z)| is at most this.
    #[arg(long, default_value = ramroot_core::ramanujan::DEFAULT_RESIDUAL_TOLERANCE)]
    pub tol: String,
    /// Stop once successive iterates differ by at most this.
    #[arg(long, default_value = "0")]
    pub step_tol: String,
    /// Record the convergence indicator at every iterate.
    #[arg(long)]
    pub condition: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value_t = Mode::Float)]
    pub mode: Mode,
    #[arg(long)]
    pub nmax: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// A_1, A_2, ... as integers, fractions or decimals.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub coeffs: Vec<String>,
    /// Number of P terms.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Mode::Rational)]
    pub mode: Mode,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TablesArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub table: u8,
    /// Highest order scanned for the rational tables.
    #[arg(long, default_value_t = ramroot_core::reproduce::SCAN_LIMIT)]
    pub nmax: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OrderArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Orders to test, `3` or an inclusive range `1..3`.
    #[arg(long)]
    pub n: String,
    #[arg(long, default_value_t = ramroot_core::ramanujan::DEFAULT_MAX_ITERATIONS)]
    pub max_iter: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `k` or `lo..hi` (inclusive). An empty range is an error.
pub fn parse_order_range(s: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("invalid order range `{s}`, expected `n` or `lo..hi`");
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo.trim(), hi.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let lo: usize = lo.parse().map_err(|_| bad())?;
    let hi: usize = hi.parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi {
        return Err(format!("order range `{s}` is empty"));
    }
    Ok((lo..=hi).collect())
}
