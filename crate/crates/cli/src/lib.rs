//! Command-line front end: argument parsing and dispatch to the library.

mod args;
mod commands;
mod tables;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use crate::args::Cli;

/// Exit status for malformed input.
pub const EXIT_USAGE: u8 = 1;
/// Exit status for size caps and arithmetic overflow.
pub const EXIT_BUDGET: u8 = 2;
/// Exit status for failed internal checks, I/O and golden mismatches.
pub const EXIT_INTERNAL: u8 = 3;

/// Failures raised by the front end itself.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Mismatch(String),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<apseq::Error>() {
        if e.is_budget() {
            EXIT_BUDGET
        } else if e.is_internal() {
            EXIT_INTERNAL
        } else {
            EXIT_USAGE
        }
    } else if let Some(e) = err.downcast_ref::<CliError>() {
        match e {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Mismatch(_) => EXIT_INTERNAL,
        }
    } else {
        EXIT_INTERNAL
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// status. Data goes to `out`, diagnostics to `err`.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    match commands::run(cli.command, out, err).and_then(|()| Ok(out.flush()?)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}
