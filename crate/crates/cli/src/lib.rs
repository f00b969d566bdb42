//! Command-line front end for `mwsplit`.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code together with everything that would be printed, so the binary and
//! the tests share one code path.

pub mod combo;
pub mod commands;
pub mod instance;
pub mod report;

use std::ffi::OsString;
use std::io;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use mwsplit::curve::CurveError;
use mwsplit::expr::ParseError;
use mwsplit::fibers::FiberError;
use mwsplit::mw::MwError;
use mwsplit::split::SplitError;
use thiserror::Error;

pub use report::Report;

/// Exit code for success.
pub const EXIT_OK: u8 = 0;
/// Exit code for bad input: parse errors, invalid instances, failed
/// hypotheses.
pub const EXIT_USER: u8 = 1;
/// Exit code for an internal invariant breach: cross-check disagreement,
/// inconsistent fiber data, failed certificate re-expansion.
pub const EXIT_INTERNAL: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{file}: {message}")]
    Format { file: String, message: String },
    #[error("{file}: {field}: {source}")]
    Expr {
        file: String,
        field: String,
        source: ParseError,
    },
    #[error("section combination {expr:?}, byte {offset}: {message}")]
    Combo {
        expr: String,
        offset: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Mw(#[from] MwError),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error("internal error: {0}")]
    Internal(String),
}

fn fiber_breach(e: &FiberError) -> bool {
    matches!(
        e,
        FiberError::Inconsistent { .. } | FiberError::Orientation(_)
    )
}

fn mw_breach(e: &MwError) -> bool {
    match e {
        MwError::OddPoleOrder(_) => true,
        MwError::Fiber(f) => fiber_breach(f),
        _ => false,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        let breach = match self {
            CliError::Internal(_) => true,
            CliError::Fiber(e) => fiber_breach(e),
            CliError::Mw(e) => mw_breach(e),
            CliError::Split(SplitError::Mw(e)) => mw_breach(e),
            CliError::Split(SplitError::Fiber(e)) => fiber_breach(e),
            _ => false,
        };
        if breach {
            EXIT_INTERNAL
        } else {
            EXIT_USER
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    /// JSON with exact rationals as "num/den" strings.
    Structured,
}

#[derive(Debug, Parser)]
#[command(
    name = "mwsplit",
    version,
    about = "Elliptic surfaces over Q(t): heights, 2-divisibility and splitting curves"
)]
pub struct Cli {
    /// Maximal height of the quadratic constant towers searched for roots
    /// [default: 3, or the instance's options.tower_cap].
    #[arg(long, global = true)]
    pub tower_cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Re-expand every certificate and fail with exit code 2 on mismatch.
    #[arg(long, global = true)]
    pub verify: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fibers, Euler number, torsion and per-section heights.
    Analyze { file: PathBuf },
    /// Evaluate a combination of sections such as `2*s0` or `s1+s2`.
    Arith { file: PathBuf, expr: String },
    /// Decide whether a combination of sections is twice a section.
    Divisible { file: PathBuf, expr: String },
    /// Decide whether a delta splits in the double cover.
    Split {
        file: PathBuf,
        /// Name of a `[delta.NAME]` block; optional when there is only one.
        delta: Option<String>,
    },
    /// Compare two configurations with the same branch curve.
    Zariski {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        delta1: Option<String>,
        #[arg(long)]
        delta2: Option<String>,
    },
    /// Pull the instance back along t -> nu(t) and write a new instance file.
    Basechange {
        file: PathBuf,
        nu: String,
        #[arg(short, long)]
        out: PathBuf,
    },
}

/// Everything a run prints and its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USER,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match commands::execute(&cli) {
        Ok(report) => Outcome {
            code: report.code,
            stdout: report.render(cli.format),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
