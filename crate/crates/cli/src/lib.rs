//! Command-line front end for the squeeze-core library: parameter sweeps,
//! squeezing optimization, amplifier calibration fits, and canned
//! reference reproductions.
//!
//! Exit codes are a stable scripting contract: 0 success, 2 configuration
//! or input validation, 3 I/O, 4 numerical failure (non-convergent fit or
//! a reproduction check outside its tolerance). The `SQUEEZE_THREADS`
//! environment variable caps the worker threads used by parallel sweeps
//! and fits; unset or 0 picks the number of cores.

use std::ffi::OsString;

use clap::Parser;

pub mod args;
pub mod config;
pub mod error;
pub mod io;

mod cmd_calibrate;
mod cmd_optimize;
mod cmd_reproduce;
mod cmd_sweep;

pub use error::{CliError, EXIT_IO, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};

use args::{Cli, Command};

/// Honor `SQUEEZE_THREADS` before any parallel work starts. The global
/// pool can only be sized once per process; later calls are no-ops, which
/// keeps this safe for in-process test harnesses.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SQUEEZE_THREADS") else {
        return Ok(());
    };
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(());
    }
    let n: usize = raw.parse().map_err(|_| {
        CliError::Usage(format!(
            "SQUEEZE_THREADS must be a non-negative integer, got {raw:?}"
        ))
    })?;
    if n == 0 {
        return Ok(());
    }
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

/// Parse arguments and run one command, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };

    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Sweep(a) => cmd_sweep::run(a),
        Command::Optimize(a) => cmd_optimize::run(a),
        Command::Calibrate(a) => cmd_calibrate::run(a),
        Command::Reproduce(a) => cmd_reproduce::run(a),
    });

    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
