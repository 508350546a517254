//! Scenario-driven experiment runner: TOML scenario configs, closed-loop
//! execution for one or both controllers, CSV trajectory emission, and a
//! metrics summary table.

pub mod output;
pub mod runner;
pub mod scenario;

use thiserror::Error;

/// CLI-level errors; the variant decides the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Simulation(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 1 = validation, 2 = simulation divergence, 3 = I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Simulation(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
