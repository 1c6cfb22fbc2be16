use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

fn version() -> String {
    let v = matcount::FORMAT_VERSION;
    format!(
        "{} (formats: matroid-text v{v}, polynomial-text v{v}, polytable v{v}, factor-text v{v}, \
         real-table v{v}, decomposition-bundle v{v}, json-report v{v})",
        env!("CARGO_PKG_VERSION")
    )
}

#[derive(Debug, Parser)]
#[command(name = "matcount", version = version(), about = "Counting and extremal experiments on simple binary matroids")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for randomized modes.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for the parallel kernels (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// log2 of the inner-operation cap.
    #[arg(long, global = true, env = "MATCOUNT_BUDGET_LOG2", default_value_t = matcount::Budget::DEFAULT_LOG2)]
    pub budget: f64,
    /// JSON experiment config with keys n, density, seed, delta, ell.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Run the built-in examples for this subcommand instead.
    #[arg(long, global = true)]
    pub selftest: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A matroid file, or a geometry such as `pg:3`, `ag:4`, `bb:5,2`, `n:3,2,1`.
#[derive(Debug, Args)]
pub struct Host {
    #[arg(long = "in", value_name = "MATROID")]
    pub input: Option<String>,
}

#[derive(Debug, Args)]
pub struct Target {
    /// The matroid being looked for (file or geometry).
    #[arg(long, value_name = "MATROID")]
    pub sub: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMode {
    Exact,
    Sampled,
    /// Copy-count lower bound against a decomposition bundle.
    Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Direct,
    Recursive,
    Wht,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtremalModeArg {
    Exact,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank, size, density and critical number.
    MatroidInfo {
        #[command(flatten)]
        host: Host,
        /// Print the matroid in the text format instead.
        #[arg(long)]
        emit: bool,
    },
    /// Critical number.
    Critical {
        #[command(flatten)]
        host: Host,
    },
    /// Search for a copy of `--sub` in `--in`.
    Contains {
        #[command(flatten)]
        host: Host,
        #[command(flatten)]
        target: Target,
    },
    /// Count copies of `--sub` in `--in`.
    Count {
        #[command(flatten)]
        host: Host,
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = CountMode::Exact)]
        mode: CountMode,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long)]
        bundle: Option<PathBuf>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 0.9)]
        zeta: f64,
    },
    /// Gowers norm of a real table, a polynomial phase or an indicator.
    Gowers {
        #[command(flatten)]
        host: Host,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
    },
    /// Degree-1 regular decomposition of an indicator, written as a bundle.
    Decompose {
        #[command(flatten)]
        host: Host,
        #[arg(long)]
        bundle: Option<PathBuf>,
        #[arg(long, default_value_t = 0.05)]
        eta_prime: f64,
    },
    /// Check a decomposition bundle against an indicator.
    Verify {
        #[command(flatten)]
        host: Host,
        #[arg(long)]
        bundle: Option<PathBuf>,
        #[arg(long)]
        delta: Option<f64>,
        /// η schedule: `0.01`, `0.5*2^(-3*C)` or `0.1,0.05`.
        #[arg(long)]
        eta: Option<String>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
    },
    /// Reduced matroid of an indicator and a decomposition bundle.
    Reduced {
        #[command(flatten)]
        host: Host,
        #[arg(long)]
        bundle: Option<PathBuf>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        zeta: Option<f64>,
    },
    /// Uniformity and atom statistics of a factor, optionally with
    /// equidistribution over the forms of `--sub`.
    Uniformity {
        #[arg(long)]
        factor: Option<PathBuf>,
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Consistency group of the linear forms of `--sub`.
    Phi {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long)]
        n0: Option<usize>,
        /// Enumerate every monomial instead of the reduced set.
        #[arg(long)]
        literal: bool,
        /// Use the glued double of the system.
        #[arg(long)]
        doubled: bool,
    },
    /// Greedy coset choice with its certificate.
    Extbb {
        /// Cyclic moduli, e.g. `2,2,2`.
        #[arg(long, value_delimiter = ',')]
        group: Vec<u64>,
        /// Subgroup orders per coordinate, e.g. `1,1,1`.
        #[arg(long, value_delimiter = ',')]
        subgroup: Vec<u64>,
        /// JSON array of `2^c - 1` sets, each a list of element tuples.
        #[arg(long)]
        sets: Option<PathBuf>,
    },
    /// A `PG(c-1,2)` copy in a dense matroid, or the size refusal.
    BoseBurton {
        #[command(flatten)]
        host: Host,
        #[arg(long)]
        c: Option<usize>,
    },
    /// Largest full-rank set of rank `--n` avoiding `--sub`.
    Extremal {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = ExtremalModeArg::Exact)]
        mode: ExtremalModeArg,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Also write the witness in the matroid text format.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Pruning step of the removal argument.
    RemovalCheck {
        #[command(flatten)]
        host: Host,
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        density: Option<f64>,
        #[arg(long, default_value_t = 0.2)]
        zeta: f64,
        #[arg(long, default_value_t = 0.05)]
        eta_prime: f64,
    },
    /// Copy densities of `N` and its double.
    DoublingCheck {
        #[command(flatten)]
        host: Host,
        #[command(flatten)]
        target: Target,
    },
    /// Copy counts in random matroids across densities.
    ErdosStoneScan {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.4,0.5,0.6,0.7")]
        densities: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// Search for `N(ℓ,2,1)` or a critical-number certificate.
    ThresholdDemo {
        #[command(flatten)]
        host: Host,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        eta_prime: Option<f64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::MatroidInfo { .. } => "matroid-info",
            Command::Critical { .. } => "critical",
            Command::Contains { .. } => "contains",
            Command::Count { .. } => "count",
            Command::Gowers { .. } => "gowers",
            Command::Decompose { .. } => "decompose",
            Command::Verify { .. } => "verify",
            Command::Reduced { .. } => "reduced",
            Command::Uniformity { .. } => "uniformity",
            Command::Phi { .. } => "phi",
            Command::Extbb { .. } => "extbb",
            Command::BoseBurton { .. } => "bose-burton",
            Command::Extremal { .. } => "extremal",
            Command::RemovalCheck { .. } => "removal-check",
            Command::DoublingCheck { .. } => "doubling-check",
            Command::ErdosStoneScan { .. } => "erdos-stone-scan",
            Command::ThresholdDemo { .. } => "threshold-demo",
        }
    }
}
