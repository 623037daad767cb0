mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::error::CliError;

/// Caps the global rayon pool from `CMUR_THREADS` (`0` or unset: one thread per core).
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("CMUR_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| CliError::Config(format!("CMUR_THREADS must be a count, got '{raw}'")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match configure_threads().and_then(|()| commands::run(&cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cmur: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
