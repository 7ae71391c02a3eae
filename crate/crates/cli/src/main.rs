//! `fisher-modes`: build separable field modes, check their Fisher
//! constraints, integrate Schwarzschild radial equations and compare
//! distributions.
//!
//! Exit codes: 0 success, 1 constraint check failed, 2 invalid input,
//! 3 computation failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fisher_modes::Error;

#[derive(Parser, Debug)]
#[command(name = "fisher-modes", version, about = "Separable field modes and their Fisher constraints")]
#[command(after_help = "Options may also come from a file given with --config FILE, one `key = value` per \
line using the long flag names; command-line flags take precedence.\n\n\
FISHER_MODES_SEED is reserved for stochastic features and is currently ignored.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a mode and write its radial samples (CSV) and parameters (JSON).
    Mode(ModeCmd),
    /// Compute the Fisher matrix of a mode and check its constraints.
    Verify(VerifyCmd),
    /// Integrate the Schwarzschild radial equation.
    Radial(RadialCmd),
    /// Fisher integrals of a hydrogenic state.
    Hydrogen(HydrogenCmd),
    /// Statistical distance between two discrete distributions.
    Distance(DistanceCmd),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyArg {
    Free,
    Localized,
    Shell,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not a finite number"))
    }
}

#[derive(Args, Debug, Clone)]
struct ModeArgs {
    #[arg(long, value_enum, default_value = "free")]
    family: FamilyArg,
    #[arg(long, default_value_t = 0)]
    ell: u32,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    m: i32,
    /// Radial index; defaults to 1 for free and shell modes, 0 for localized.
    #[arg(long)]
    n: Option<u32>,
    /// Temporal frequency.
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Box radius for free modes.
    #[arg(long, alias = "rmax", value_parser = finite, default_value = "1")]
    rbox: f64,
    /// Requested alpha^2; checked for evanescence, then fixed by the quantization.
    #[arg(long = "alpha-sq", value_parser = finite, allow_negative_numbers = true)]
    alpha_sq: Option<f64>,
    /// Oscillator strength for localized modes.
    #[arg(long, value_parser = finite)]
    beta: Option<f64>,
    /// Radial spread; picks beta when --beta is absent.
    #[arg(long, value_parser = finite)]
    sigma: Option<f64>,
    /// Mass for a Klein-Gordon free mode.
    #[arg(long, value_parser = finite)]
    mu: Option<f64>,
    #[arg(long, value_parser = finite, default_value = "1")]
    hbar: f64,
    #[arg(long, value_parser = finite, default_value = "1")]
    c: f64,
    /// Schwarzschild radius for shell modes.
    #[arg(long, value_parser = finite, default_value = "1")]
    rs: f64,
    #[arg(long, value_parser = finite)]
    rin: Option<f64>,
    #[arg(long, value_parser = finite)]
    rout: Option<f64>,
    #[arg(long = "rel-tol", value_parser = finite, default_value = "1e-10")]
    rel_tol: f64,
    #[arg(long = "nodes-r")]
    n_r: Option<usize>,
    #[arg(long = "nodes-theta")]
    n_theta: Option<usize>,
    #[arg(long = "nodes-phi")]
    n_phi: Option<usize>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct ModeCmd {
    #[command(flatten)]
    mode: ModeArgs,
    /// Output prefix; writes PREFIX.csv and PREFIX.json.
    #[arg(long, default_value = "mode")]
    out: PathBuf,
    /// Number of radial samples.
    #[arg(long, default_value_t = 201)]
    samples: usize,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct VerifyCmd {
    #[command(flatten)]
    mode: ModeArgs,
    /// Check the hydrogenic state N L M instead of the mode options.
    #[arg(long, num_args = 3, value_names = ["N", "L", "M"], allow_negative_numbers = true)]
    hydrogen: Option<Vec<i64>>,
    /// Bohr radius for --hydrogen.
    #[arg(long, value_parser = finite, default_value = "1")]
    a: f64,
    #[arg(long, value_parser = finite, default_value = "1e-6")]
    tol: f64,
    #[arg(long, default_value = "fisher_report.json")]
    out: PathBuf,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct RadialCmd {
    #[arg(long, value_parser = finite, default_value = "0")]
    rs: f64,
    #[arg(long, value_parser = finite, default_value = "0", allow_negative_numbers = true)]
    eta: f64,
    #[arg(long, default_value_t = 0)]
    ell: u32,
    #[arg(long = "alpha-sq", value_parser = finite, default_value = "0", allow_negative_numbers = true)]
    alpha_sq: f64,
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    rstart: Option<f64>,
    #[arg(long, value_parser = finite)]
    rend: f64,
    #[arg(long = "init-value", value_parser = finite, default_value = "1", allow_negative_numbers = true)]
    init_value: f64,
    #[arg(long = "init-slope", value_parser = finite, default_value = "0", allow_negative_numbers = true)]
    init_slope: f64,
    /// Start at rs (1 + DELTA) with Frobenius initial data.
    #[arg(long = "near-horizon", value_parser = finite, value_name = "DELTA")]
    near_horizon: Option<f64>,
    #[arg(long = "rel-tol", value_parser = finite, default_value = "1e-10")]
    rel_tol: f64,
    #[arg(long, default_value = "radial.csv")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct HydrogenCmd {
    #[arg(long, default_value_t = 3)]
    n: u32,
    #[arg(long, default_value_t = 2)]
    ell: u32,
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    m: i32,
    #[arg(long, value_parser = finite, default_value = "1")]
    a: f64,
    #[arg(long, value_parser = finite, default_value = "1e-6")]
    tol: f64,
    /// Also write the table as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct DistanceCmd {
    /// Comma-separated probabilities.
    #[arg(long, value_delimiter = ',', value_parser = finite, required = true)]
    a: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = finite, required = true)]
    b: Vec<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
enum CliError {
    Core(Error),
    Usage(String),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(e) => match e {
                Error::Domain { .. }
                | Error::AngularIndex { .. }
                | Error::UnsupportedIndex { .. }
                | Error::Horizon { .. }
                | Error::CoordinateSingularity { .. }
                | Error::InvalidParameter { .. }
                | Error::Evanescent { .. }
                | Error::NotNormalized { .. }
                | Error::Shape { .. }
                | Error::MetricMismatch => 2,
                Error::NonFiniteIntegrand { .. }
                | Error::Convergence { .. }
                | Error::NearHorizon { .. }
                | Error::StepUnderflow { .. }
                | Error::BlowUp { .. }
                | Error::NoBracket { .. } => 3,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// What a successful command reports back.
enum Outcome {
    Done,
    CheckFailed,
}

fn main() -> ExitCode {
    let args = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Mode(cmd) => commands::mode(&cmd),
        Command::Verify(cmd) => commands::verify(&cmd),
        Command::Radial(cmd) => commands::radial(&cmd),
        Command::Hydrogen(cmd) => commands::hydrogen(&cmd),
        Command::Distance(cmd) => commands::distance(&cmd),
    };
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::from(e.exit_code())
        }
    }
}
