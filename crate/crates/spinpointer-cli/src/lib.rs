//! Command-line driver: configuration handling, the individual subcommands and
//! their tabular output. The `spinpointer` binary is a thin wrapper.

pub mod commands;
pub mod config;
pub mod output;
pub mod validate;

use std::process::ExitCode;

/// Failure of a CLI run, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or arguments: exit code 2.
    Config(String),
    /// A quadrature did not converge or produced non-finite values: exit code 3.
    Numerical(String),
    /// The validation suite found a failing invariant: exit code 1.
    Validation(String),
    /// Output could not be written: exit code 1.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Validation(_) | CliError::Io(_) => 1,
        })
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Validation(m) => write!(f, "validation failed: {m}"),
            CliError::Io(m) => write!(f, "output error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<spinpointer::Error> for CliError {
    fn from(e: spinpointer::Error) -> Self {
        match e {
            spinpointer::Error::Domain(_) | spinpointer::Error::Capability { .. } => CliError::Config(e.to_string()),
            spinpointer::Error::Numeric { .. } | spinpointer::Error::Convergence { .. } => CliError::Numerical(e.to_string()),
        }
    }
}
