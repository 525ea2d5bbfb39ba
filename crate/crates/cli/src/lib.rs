//! Experiment harness for integer Cantor sets.
//!
//! Every subcommand reads an [`ExperimentConfig`] (a config file overlaid by
//! flags), runs one computation from `cantor-core` and writes a [`Table`] as
//! CSV, with a JSON mirror when writing to files.

pub mod acceptance;
mod args;
mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;

use clap::Parser;
use thiserror::Error;

pub use config::{parse_config, ExperimentConfig};
pub use report::Table;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cantor_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    /// Some acceptance criterion did not hold.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 2 for violated hypotheses and failed claims, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_hypothesis_violation() => 2,
            CliError::Failed(_) => 2,
            _ => 1,
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
