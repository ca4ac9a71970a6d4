//! `la2`: classify, reduce, solve and count LA2-type quadratic Diophantine
//! equations from the command line.
//!
//! [`run`] holds the whole program so it can be driven from tests; the
//! binary only forwards the process arguments and streams.

pub mod commands;
pub mod input;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use la2_core::{Error, DEFAULT_ORACLE_CAP};
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;
pub const EXIT_BELOW_BOUND: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

pub const ORACLE_CAP_ENV: &str = "LA2_ORACLE_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "la2",
    version,
    about = "Exact solver and lattice-point counter for LA2-type quadratic Diophantine equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the LA2 conditions and report every violation
    Classify(EquationArgs),
    /// Show the Pell-type form and both changes of variables
    Reduce(EquationArgs),
    /// Show N0, the per-branch P, Q, R, N_l, M'_l table and the bound L
    Thresholds(EquationArgs),
    /// Count solutions with |u| + |v| <= x
    Count(RegionArgs),
    /// List solutions with |u| + |v| <= x, sorted by (u, v)
    Enumerate(RegionArgs),
    /// Compare the closed form with a brute-force scan
    Verify(VerifyArgs),
    /// Build the monic equation with given lambda, tau, E/D = p and d/2 = q
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct EquationArgs {
    /// Coefficients a b c d e f of a u^2 + b uv + c v^2 + d u + e v + f = 0
    #[arg(value_name = "COEFF", allow_negative_numbers = true, num_args = 0..=6)]
    pub coeffs: Vec<String>,
    /// Coefficients as "a,b,c,d,e,f"
    #[arg(long = "coeffs", value_name = "CSV", allow_hyphen_values = true)]
    pub csv: Option<String>,
    /// JSON file with keys a..f (or "-" for stdin)
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Emit a single JSON object
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub equation: EquationArgs,
    /// Region size; any decimal, floored exactly
    #[arg(long, allow_negative_numbers = true)]
    pub x: String,
    /// Below L, answer with the brute-force scan instead of failing
    #[arg(long)]
    pub fallback_oracle: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub equation: EquationArgs,
    #[arg(
        long,
        allow_negative_numbers = true,
        conflicts_with = "x_range",
        required_unless_present = "x_range"
    )]
    pub x: Option<String>,
    /// Inclusive range A..B
    #[arg(long, value_name = "A..B")]
    pub x_range: Option<String>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: String,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: String,
    #[arg(long, allow_negative_numbers = true)]
    pub p: String,
    #[arg(long, allow_negative_numbers = true)]
    pub q: String,
    #[arg(long)]
    pub json: bool,
}

/// A failure with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            kind: "usage",
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::NotLa2(_) => (EXIT_REJECTED, "not_la2"),
            Error::UnsupportedClass { .. } => (EXIT_REJECTED, "unsupported_class"),
            Error::BelowThreshold { .. } => (EXIT_BELOW_BOUND, "below_bound"),
            Error::Internal(_) | Error::RingMismatch { .. } => (EXIT_INTERNAL, "internal"),
            Error::OracleCap { .. } | Error::PeriodCap { .. } | Error::IterationCap { .. } => {
                (EXIT_USAGE, "limit")
            }
            Error::BadRadicand(_)
            | Error::NonPositiveLeading(_)
            | Error::NegativeRegion(_)
            | Error::ZeroIndex
            | Error::ClassIndex(_) => (EXIT_USAGE, "usage"),
        };
        CliError {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

/// What a command produced: the JSON document, its human rendering and
/// the exit code.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub input: Value,
    pub result: Value,
    pub warnings: Vec<String>,
    pub human: String,
    pub code: i32,
}

impl Report {
    pub fn document(&self) -> Value {
        json!({
            "command": self.command,
            "input": self.input,
            "result": self.result,
            "warnings": self.warnings,
        })
    }
}

pub struct Settings {
    pub oracle_cap: u64,
}

impl Settings {
    pub fn from_env() -> Result<Self, CliError> {
        let oracle_cap = match std::env::var(ORACLE_CAP_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| {
                CliError::usage(format!("{ORACLE_CAP_ENV}={v} is not a nonnegative integer"))
            })?,
            Err(_) => DEFAULT_ORACLE_CAP,
        };
        Ok(Settings { oracle_cap })
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify(_) => "classify",
        Command::Reduce(_) => "reduce",
        Command::Thresholds(_) => "thresholds",
        Command::Count(_) => "count",
        Command::Enumerate(_) => "enumerate",
        Command::Verify(_) => "verify",
        Command::Generate(_) => "generate",
    }
}

fn wants_json(c: &Command) -> bool {
    match c {
        Command::Classify(a) | Command::Reduce(a) | Command::Thresholds(a) => a.json,
        Command::Count(r) | Command::Enumerate(r) => r.equation.json,
        Command::Verify(v) => v.equation.json,
        Command::Generate(g) => g.json,
    }
}

/// Run the program; returns the exit code.
pub fn run<I, S>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let json = wants_json(&cli.command);
    let name = command_name(&cli.command);
    let outcome = Settings::from_env().and_then(|s| commands::dispatch(&cli.command, &s, stdin));
    match outcome {
        Ok(report) => {
            if json {
                let _ = writeln!(stdout, "{}", report.document());
            } else {
                let _ = write!(stdout, "{}", report.human);
                for w in &report.warnings {
                    let _ = writeln!(stderr, "warning: {w}");
                }
            }
            report.code
        }
        Err(e) => {
            if json {
                let mut doc = Map::new();
                doc.insert("command".into(), json!(name));
                doc.insert(
                    "error".into(),
                    json!({"kind": e.kind, "message": e.message}),
                );
                let _ = writeln!(stdout, "{}", Value::Object(doc));
            } else {
                let _ = writeln!(stderr, "error: {}", e.message);
            }
            e.code
        }
    }
}
