//! `qscore`: validate input tables, score cohorts into the store, render reports.
//!
//! Exit codes: 0 success, 1 data or validation error, 2 usage or I/O error.

mod commands;
mod config;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::Parser;

pub use config::{Cli, Command, ConfigFile, RunArgs, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DATA: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable config, missing or unwritable files.
    Usage(String),
    /// Invalid input data or a scoring/analytics failure.
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

impl From<qscore_core::Error> for CliError {
    fn from(e: qscore_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<qscore_core::data::StoreError> for CliError {
    fn from(e: qscore_core::data::StoreError) -> Self {
        use qscore_core::data::StoreError;
        match e {
            StoreError::Corrupt { .. } => CliError::Data(e.to_string()),
            StoreError::Io { .. } | StoreError::Encode(_) => CliError::Usage(e.to_string()),
        }
    }
}

/// Parses `args` and runs the selected subcommand, returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result =
        RunConfig::resolve(cli.args(), std::env::var_os("QSCORE_STORE")).and_then(|config| match cli.command {
            Command::Validate(_) => commands::validate(&config, out),
            Command::Score(_) => commands::score(&config, out),
            Command::Report(_) => commands::report(&config, out),
        });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
