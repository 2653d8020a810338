//! Command line front end for the array synchronization simulator.
//!
//! The binary resolves a simulation configuration from defaults, an
//! optional flat key=value config file, and command line flags (later
//! sources win), then runs either a plain Monte Carlo sweep or one of
//! the figure presets and writes CSV files plus a JSON run manifest.

pub mod config;
pub mod output;
pub mod preset;
pub mod runner;

/// Failure category surfaced to the shell.
///
/// Config errors (bad flags, bad config file, out-of-range values) exit
/// with code 2; runtime errors (I/O, simulation failures) exit with 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Runtime(_) => "runtime",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Runtime(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "error[{}]: {}", self.category(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<arraysync_core::Error> for CliError {
    fn from(e: arraysync_core::Error) -> Self {
        match e {
            arraysync_core::Error::Config(_) => CliError::Config(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
