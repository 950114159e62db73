//! `gup-spectra` front end. Flags override a `key=value` config file, which
//! overrides the built-in defaults.

mod commands;
mod config;
pub mod output;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{Format, RunConfig};
pub use verify::Suite;

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gup-spectra", version, about = "Spectra, states and metrics for [X,P] = iħ(1 + τ̌P²)")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// ho | swanson | pt
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// pi1 | pi2 | pi3 | pi4 | pi4prime
    #[arg(long, global = true)]
    pub rep: Option<String>,
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Highest level index.
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Finite-difference grid size (the oracle also uses 2N and 4N).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Relative tolerance for --check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Compare against the finite-difference eigensolver.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Exit with status 2 when a check fails.
    #[arg(long, global = true)]
    pub check: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form energies, optionally against the eigensolver.
    Spectrum,
    /// Normalized eigenfunction and metric on a momentum grid.
    Wavefunction(SampleArgs),
    /// Metric from the general construction next to the stated closed form.
    Metric(SampleArgs),
    /// Metric-weighted expectation values in every representation.
    Expectation(ExpectationArgs),
    /// Swanson phase boundary β(α) for several τ.
    Phase(PhaseArgs),
    /// Consistency suites.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Wavefunction(_) => "wavefunction",
            Command::Metric(_) => "metric",
            Command::Expectation(_) => "expectation",
            Command::Phase(_) => "phase",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Level index.
    #[arg(short, long, default_value_t = 0)]
    pub n: usize,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Lower end of the sample range (imaginary part of p for pi4).
    #[arg(long, allow_hyphen_values = true)]
    pub pmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub pmax: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ExpectationArgs {
    /// Operator words such as X^2, XP+PX, P^-2 or H; repeatable.
    #[arg(long = "word")]
    pub words: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PhaseArgs {
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 16.0, allow_hyphen_values = true)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha_step: f64,
    /// Comma-separated τ values; defaults to the configured τ.
    #[arg(long, value_delimiter = ',')]
    pub taus: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Use the non-normalizable root in the orthonormality suite.
    #[arg(long, hide = true)]
    pub wrong_branch: bool,
}

/// What a command hands back before rendering.
pub struct Outcome {
    pub table: output::Table,
    pub failed: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(e) if usage_like(e) => EXIT_USAGE,
            CliError::Numeric(_) | CliError::Io(_) => EXIT_NUMERIC,
        }
    }
}

fn usage_like(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidParameter(_) | Error::UnsupportedPair { .. } | Error::IntrinsicNoncommutativity | Error::DomainMismatch(_)
    )
}

/// Parse, run and render; returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, stdout) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFY,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// `Ok(false)` when a requested check failed.
fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let cfg = RunConfig::resolve(&cli.common, &cli.command)?;
    let outcome = match &cli.command {
        Command::Spectrum => commands::spectrum(&cfg)?,
        Command::Wavefunction(a) => commands::wavefunction(&cfg, a)?,
        Command::Metric(a) => commands::metric(&cfg, a)?,
        Command::Expectation(a) => commands::expectation(&cfg, a)?,
        Command::Phase(a) => commands::phase(&cfg, a)?,
        Command::Verify(a) => verify::run(&cfg, a)?,
    };
    let text = match cfg.format {
        Format::Csv => outcome.table.csv(),
        Format::Json => outcome.table.json(cli.command.name(), &cfg),
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    let checked = cfg.check || matches!(cli.command, Command::Verify(_));
    Ok(!(checked && outcome.failed))
}

impl ValueEnum for Suite {
    fn value_variants<'a>() -> &'a [Self] {
        &Suite::ALL_SUITES
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.label()))
    }
}
