//! `mbsym`: simulate the Maxwell-Bloch systems and run the exact checks.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mbsym::{IntegratorId, Suite, SystemId};

#[derive(Parser, Debug)]
#[command(name = "mbsym", version, about = "Maxwell-Bloch symmetry toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate a system and write the trajectory as CSV.
    Simulate(SimulateArgs),
    /// Evaluate the conserved quantities on a trajectory file or a single state.
    Invariants(InvariantsArgs),
    /// Run exact verification suites and print a JSON report.
    Verify(VerifyArgs),
    /// Print the commutator tables and the coordinate Poisson brackets.
    BracketTable,
    /// Solve the determining equations for polynomial point symmetries.
    SolveSymmetries(SolveArgs),
    /// Print the version.
    Version,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SystemArg {
    Mb5,
    Ham6,
    El6,
}

impl From<SystemArg> for SystemId {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::Mb5 => SystemId::Mb5,
            SystemArg::Ham6 => SystemId::Ham6,
            SystemArg::El6 => SystemId::El6,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodArg {
    Rk4,
    #[value(alias = "implicit-midpoint")]
    Midpoint,
}

impl From<MethodArg> for IntegratorId {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Rk4 => IntegratorId::Rk4,
            MethodArg::Midpoint => IntegratorId::ImplicitMidpoint,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SuiteArg {
    Poisson,
    Cocycle,
    Algebra,
    Symmetry,
    Variational,
    Noether,
    Pushforward,
    Realization,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Poisson => Suite::Poisson,
            SuiteArg::Cocycle => Suite::Cocycle,
            SuiteArg::Algebra => Suite::Algebra,
            SuiteArg::Symmetry => Suite::Symmetry,
            SuiteArg::Variational => Suite::Variational,
            SuiteArg::Noether => Suite::Noether,
            SuiteArg::Pushforward => Suite::Pushforward,
            SuiteArg::Realization => Suite::Realization,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub system: SystemArg,
    #[arg(long, value_enum, default_value = "rk4")]
    pub method: MethodArg,
    /// Initial state, comma separated (5 values for mb5, 6 otherwise).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub init: Vec<f64>,
    #[arg(long)]
    pub t_end: f64,
    #[arg(long)]
    pub h: f64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Keep every N-th step; the final step is always kept.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub every: u64,
}

#[derive(Args, Debug)]
pub struct InvariantsArgs {
    #[arg(long, value_enum)]
    pub system: SystemArg,
    /// CSV trajectory as written by `simulate`.
    #[arg(long, conflicts_with = "at", required_unless_present = "at")]
    pub input: Option<PathBuf>,
    /// A single state, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub at: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: SuiteArg,
    /// Mutation fixture: reverse the sign of pi entry I,J (1-based).
    #[arg(long, hide = true, value_delimiter = ',', num_args = 1, conflicts_with = "flip_family_sign")]
    pub flip_pi_sign: Option<Vec<usize>>,
    /// Mutation fixture: reverse the sign of term N (1-based) of the symmetry family.
    #[arg(long, hide = true)]
    pub flip_family_sign: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Total degree of the polynomial ansatz for xi and eta.
    #[arg(long, default_value_t = 2)]
    pub max_degree: i64,
}

/// Everything that ends the process early, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(String),
    Verification(String),
    Io(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Verification(_) => 4,
            Failure::Io(_) | Failure::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) | Failure::Verification(m) | Failure::Io(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<mbsym::Error> for Failure {
    fn from(e: mbsym::Error) -> Self {
        use mbsym::Error::*;
        match e {
            NewtonDivergence { .. } | BlowUp { .. } => Failure::Numeric(e.to_string()),
            Dimension { .. } | InvalidArgument(_) | IndexOutOfRange(_) | InvariantDomain { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(a) => commands::simulate(&a),
        Command::Invariants(a) => commands::invariants(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::BracketTable => commands::bracket_table(),
        Command::SolveSymmetries(a) => commands::solve_symmetries(&a),
        Command::Version => {
            println!("mbsym {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mbsym: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
