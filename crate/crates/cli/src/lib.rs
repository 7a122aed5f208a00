//! Command-line front end: parse an equation, solve it, print a report.
//!
//! Exit codes: 0 verified solve, 1 parse or usage error, 2 solver error,
//! 3 verification failure.

pub mod dsl;
pub mod report;
pub mod schema;

use std::io::Write;

use clap::{Parser, Subcommand};
use delta_laplace::{solve_ivp_with, transform, Error, Exec, VerifyOptions};

pub use dsl::{format_equation, parse_equation, parse_sequence, DslError, ParseError, SemanticError};
pub use report::{format_report, format_table, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "delta-laplace",
    version,
    about = "Solve difference equations with the discrete Laplace transform"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an initial value problem, e.g. "D f = n ; f(1) = 1".
    Solve {
        equation: String,
        /// Verify the closed form against the recurrence up to this index.
        #[arg(long, default_value_t = 1000)]
        check_to: usize,
        /// Points s > 0 for the numeric transform check.
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2", allow_negative_numbers = true)]
        s_grid: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the table of transform pairs.
    Table,
    /// Print the image of a sequence, e.g. "1/n^2" or "3*n - 1".
    Transform { term: String },
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve {
            equation,
            check_to,
            s_grid,
            format,
        } => solve(&equation, check_to, s_grid, format),
        Command::Table => Ok(format_table()),
        Command::Transform { term } => parse_sequence(&term)
            .map_err(|e| (EXIT_INPUT, e.to_string()))
            .and_then(|seq| {
                transform(&seq)
                    .map(|image| format!("{image}\n"))
                    .map_err(|e| (EXIT_SOLVER, e.to_string()))
            }),
    };
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err((code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

fn solve(
    equation: &str,
    check_to: usize,
    s_grid: Vec<f64>,
    format: Format,
) -> Result<String, (i32, String)> {
    let eq = parse_equation(equation).map_err(|e| (EXIT_INPUT, e.to_string()))?;
    let reach = eq.ics.iter().map(|ic| ic.index).max().unwrap_or(1);
    if check_to < reach {
        return Err((
            EXIT_INPUT,
            format!("--check-to {check_to} is below the largest initial-condition index {reach}"),
        ));
    }
    if let Some(s) = s_grid.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err((EXIT_INPUT, format!("--s-grid values must be positive, got {s}")));
    }
    let opts = VerifyOptions {
        check_to,
        s_grid,
        exec: Exec::default(),
    };
    match solve_ivp_with(&eq, &opts) {
        Ok(report) => Ok(format_report(&report, format)),
        Err(Error::VerificationFailed(result)) => Err((
            EXIT_VERIFICATION,
            format!("closed form failed verification: {result}"),
        )),
        Err(e @ (Error::MissingInitialCondition(_) | Error::MalformedEquation(_))) => {
            Err((EXIT_INPUT, e.to_string()))
        }
        Err(e) => Err((EXIT_SOLVER, e.to_string())),
    }
}
