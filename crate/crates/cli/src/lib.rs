//! The `odkit` command-line driver: ingest CSV into the embedded store, run a
//! detector over a queried time range, generate synthetic data and list the
//! available algorithms.
//!
//! Exit codes: 0 success, 2 usage or input, 3 data or schema, 4 algorithm,
//! 5 internal.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::Cli;
pub use error::{CliError, EXIT_ALGORITHM, EXIT_DATA, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE};

use crate::args::Command;
use crate::commands::Context;

/// Parses `argv` and runs the command, returning the exit code. Normal output
/// goes to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Ingest(a) => commands::ingest(&Context::resolve(cli)?, a, out),
        Command::Detect(a) => commands::detect(&Context::resolve(cli)?, a, out),
        Command::Generate(g) => commands::generate(g, out),
        Command::ListAlgos(a) => commands::list_algos(a, out),
    }
}
