use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid configuration or arguments (exit 2).
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Analysis(#[from] platoon_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Analysis(platoon_core::Error::StepTooLarge { .. }) => ExitCode::from(2),
            CliError::Analysis(platoon_core::Error::InvalidConfig { .. }) => ExitCode::from(2),
            CliError::Analysis(platoon_core::Error::DefectiveSpectrum(_)) => ExitCode::from(4),
            _ => ExitCode::from(1),
        }
    }
}
