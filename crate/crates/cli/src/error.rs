use std::path::PathBuf;

use breakpoint_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("estimation error: {0}")]
    Estimation(CoreError),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Data(_) => 3,
            Self::Estimation(_) => 4,
            Self::Output { .. } => 1,
        }
    }

    pub fn output(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Output { path: path.into(), source }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidDataset(_) | CoreError::SingularDesign { .. } => Self::Data(e.to_string()),
            CoreError::InvalidTrim(_)
            | CoreError::EmptyGrid { .. }
            | CoreError::InvalidWeight(_)
            | CoreError::WeightShapeMismatch { .. }
            | CoreError::InvalidArgument(_) => Self::Config(e.to_string()),
            other => Self::Estimation(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
