use std::io;
use std::path::PathBuf;

use thiserror::Error;
use weylbrane::brane::BraneError;
use weylbrane::cosmology::CosmologyError;
use weylbrane::weyl::WeylError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("admissibility error: {0}")]
    Admissibility(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
    #[error("{failed} of {total} validation checks failed")]
    ValidationFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ValidationFailed { .. } => 1,
            CliError::Config(_) | CliError::Output { .. } => 2,
            CliError::Admissibility(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<CosmologyError> for CliError {
    fn from(e: CosmologyError) -> Self {
        match e {
            CosmologyError::ComplexExponents { .. } | CosmologyError::ZeroB1 | CosmologyError::NonPositiveWarp(_) => {
                CliError::Admissibility(e.to_string())
            }
            CosmologyError::InvalidGrid(_) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<BraneError> for CliError {
    fn from(e: BraneError) -> Self {
        match e {
            BraneError::Cosmology(c) => c.into(),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<WeylError> for CliError {
    fn from(e: WeylError) -> Self {
        CliError::Numerical(e.to_string())
    }
}
