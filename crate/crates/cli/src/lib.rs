//! `divsum` command-line front end: identity verification, recovery tables,
//! partial sums, kernel samples and Mellin cross-checks as JSON or CSV reports.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{ConfigFile, Digits, Format};
use divsum_core::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Core(Error::PrecisionInsufficient(_)) => EXIT_PRECISION,
            CliError::Core(Error::Errata(_)) => EXIT_FAIL,
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "divsum", version, about = "Divisor-function exponential-sum identities and recovery tables")]
pub struct Cli {
    /// key=value file; flags take precedence over it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Working digits or "auto" (env DIVSUM_DIGITS when neither flag nor config sets it)
    #[arg(long, global = true)]
    pub digits: Option<Digits>,
    /// json or csv
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Significant digits printed for values
    #[arg(long, global = true)]
    pub sig: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate truncated identity sums against their exact targets
    Verify(VerifyArgs),
    /// Solve the kernel matrix for σ_a(2..=N+1)
    Recover(RecoverArgs),
    /// Partial sums of one kernel family at several cutoffs
    PartialSums(PartialSumsArgs),
    /// Sample P_k(x)e^{-x} on a grid
    KernelDump(KernelDumpArgs),
    /// Integral representation of ξ(s0)ξ(s0-a) and the Ξ functional equation
    XiCheck(XiCheckArgs),
    /// Closed-form J_a against vertical-line quadrature
    MellinCheck(MellinCheckArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// cor3, constraint, constraint-1f1, higher-homogeneous, higher-inhomogeneous, bessel0, normalized-q
    #[arg(long)]
    pub family: Option<String>,
    /// Exponents, e.g. 1,3,5
    #[arg(long)]
    pub a: Option<String>,
    /// Constraint indices, e.g. 0..20
    #[arg(long)]
    pub k: Option<String>,
    /// Last n included in the sum
    #[arg(long)]
    pub trunc: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    #[arg(long)]
    pub a: Option<u32>,
    /// Number of unknowns; solves for n = 2..=N+1
    #[arg(long = "N")]
    pub n: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PartialSumsArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// e.g. 10,40,70,100,130
    #[arg(long)]
    pub cutoffs: Option<String>,
}

#[derive(Debug, Args)]
pub struct KernelDumpArgs {
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub from: Option<String>,
    #[arg(long)]
    pub to: Option<String>,
    #[arg(long)]
    pub step: Option<String>,
}

#[derive(Debug, Args)]
pub struct XiCheckArgs {
    /// Exponent, possibly complex
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub s0: Option<String>,
    /// Abscissa of the line integral
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Dirichlet terms kept in the integrand
    #[arg(long)]
    pub trunc: Option<u64>,
    /// Prime counts for the functional-equation check
    #[arg(long = "N")]
    pub n: Option<String>,
    /// Allowed |direct − integral|
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MellinCheckArgs {
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    /// Comma-separated complex points
    #[arg(long, allow_hyphen_values = true)]
    pub s0: Option<String>,
    /// Allowed relative difference
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Shared settings after flag/config/env resolution.
pub struct Settings {
    pub file: ConfigFile,
    pub digits: Option<Digits>,
    pub sig: usize,
}

/// Parse arguments, run one command, print the report. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("divsum: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let digits = file.digits(cli.digits)?;
    let sig = file.pick(cli.sig, "sig")?.unwrap_or(30);
    if sig == 0 {
        return Err(CliError::Usage("--sig must be positive".into()));
    }
    let output = file.pick(cli.output.map(|p| p.display().to_string()), "output")?;
    let table_like = matches!(cli.command, Command::Recover(_) | Command::KernelDump(_));
    let default_format = if table_like { Format::Csv } else { Format::Json };
    let format = file.pick(cli.format, "format")?.unwrap_or(default_format);
    let settings = Settings { file, digits, sig };

    let report = match &cli.command {
        Command::Verify(a) => commands::verify(a, &settings)?,
        Command::Recover(a) => commands::recover(a, &settings)?,
        Command::PartialSums(a) => commands::partial_sums(a, &settings)?,
        Command::KernelDump(a) => commands::kernel_dump(a, &settings)?,
        Command::XiCheck(a) => commands::xi_check(a, &settings)?,
        Command::MellinCheck(a) => commands::mellin_check(a, &settings)?,
    };
    let text = report.render(format)?;
    match output {
        Some(p) => report::write_atomic(std::path::Path::new(&p), &text)?,
        None => print!("{text}"),
    }
    Ok(if report.all_pass() { EXIT_PASS } else { EXIT_FAIL })
}
