//! Command-line front end: configuration ingestion, nucleus presets, run
//! orchestration, and file outputs (trace CSV, summary, Pauli dumps).

pub mod config;
pub mod fixtures;
pub mod output;
pub mod presets;
pub mod runner;
pub mod trace_compare;

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Configuration problems carry the offending line when known.
    Config { path: String, line: Option<usize>, message: String },
    Io { path: String, message: String },
    Run(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { path, line: Some(line), message } => {
                write!(f, "{path}:{line}: {message}")
            }
            CliError::Config { path, line: None, message } => write!(f, "{path}: {message}"),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
            CliError::Run(message) => write!(f, "{message}"),
        }
    }
}

impl std::error::Error for CliError {}

pub fn io_error(path: &str, err: std::io::Error) -> CliError {
    CliError::Io { path: path.to_string(), message: err.to_string() }
}
