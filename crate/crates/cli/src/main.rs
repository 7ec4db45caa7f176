//! `twist-rod`: critical twist-buckling torque of profiled rods.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 input error, 3 numerical
//! error, 4 optimizer did not converge.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod analyze;
mod optimize;
mod verify;

pub(crate) const EXIT_VERIFY: u8 = 1;
pub(crate) const EXIT_INPUT: u8 = 2;
pub(crate) const EXIT_NUMERIC: u8 = 3;
pub(crate) const EXIT_NOT_CONVERGED: u8 = 4;

#[derive(Parser)]
#[command(name = "twist-rod", version, about = "Twist buckling of elastic rods with variable cross-section")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical torque, isoperimetric bound and mode shape of one rod
    Analyze(AnalyzeArgs),
    /// Maximize the critical torque at fixed volume
    Optimize(OptimizeArgs),
    /// Run the seeded cross-validation suites
    Verify(VerifyArgs),
}

#[derive(Args)]
pub(crate) struct AnalyzeArgs {
    /// Rod descriptor (JSON)
    #[arg(long)]
    spec: PathBuf,
    /// Write the mode shape as CSV (`x,y,z`) to this file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also solve the boundary-value problem by shooting and report the disagreement
    #[arg(long)]
    oracle: bool,
    /// RK4 steps for the shooting oracle
    #[arg(long, default_value_t = twist_rod::oracle::DEFAULT_STEPS)]
    steps: usize,
}

#[derive(Args)]
pub(crate) struct OptimizeArgs {
    /// Problem descriptor (JSON)
    #[arg(long)]
    spec: PathBuf,
    /// Segment count for a random initial design (overrides the file)
    #[arg(long)]
    segments: Option<usize>,
    /// Seed for the random initial design (overrides the file)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = twist_rod::optimizer::DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Stop once the relative objective improvement drops below this
    #[arg(long, default_value_t = twist_rod::optimizer::DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
pub(crate) struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Random cases per suite
    #[arg(long, default_value_t = 50)]
    n: usize,
    /// RK4 steps for the shooting oracle
    #[arg(long, default_value_t = twist_rod::oracle::DEFAULT_STEPS)]
    steps: usize,
    /// Test hook: bound rods with the root-form exponent instead of the Hölder bound
    #[arg(long, hide = true)]
    inject_wrong_exponent: bool,
}

/// Error carrying the exit code it maps to.
pub(crate) struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERIC,
            message: message.into(),
        }
    }
}

impl From<twist_rod::Error> for Failure {
    fn from(e: twist_rod::Error) -> Self {
        match e {
            twist_rod::Error::Domain(_) => Self::input(e.to_string()),
            _ => Self::numeric(e.to_string()),
        }
    }
}

impl From<twist_rod::descriptor::DescriptorError> for Failure {
    fn from(e: twist_rod::descriptor::DescriptorError) -> Self {
        Self::input(e.to_string())
    }
}

pub(crate) fn read_input(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => analyze::run(&args),
        Command::Optimize(args) => optimize::run(&args),
        Command::Verify(args) => verify::run(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
