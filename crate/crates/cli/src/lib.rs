//! Command-line front end: configuration, dispatch and serialization.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod output;

use std::io::Write;

pub use config::{parse_config, RunConfig};
pub use error::CliError;

/// Runs the CLI on `args` (program name first) and returns the exit code.
/// Results go to `out` unless `--out` is set; diagnostics go to `err`.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match try_run(args, out) {
        Ok(()) => 0,
        Err(CliError::Usage(e)) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            0
        }
        Err(CliError::Usage(e)) => {
            let _ = write!(err, "{e}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn try_run(args: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let config = parse_config(args)?;
    let report = commands::execute(&config)?;
    match &config.out {
        Some(path) => commands::write_report(&report, &config, path),
        None => out
            .write_all(commands::render(&report, &config).as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write output: {e}"))),
    }
}
