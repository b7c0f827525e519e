use qbattery_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Analysis(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Analysis(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Input(m) | CliError::Analysis(m) | CliError::Mismatch(m) => m.clone(),
            CliError::Io(e) => e.to_string(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(_)
            | CoreError::ModeOutOfRange { .. }
            | CoreError::TimeStepTooCoarse { .. }
            | CoreError::InvalidTime(_)
            | CoreError::EmptyGrid
            | CoreError::SizeOutOfRange { .. } => CliError::Input(e.to_string()),
            CoreError::EigenSolverFailed { .. }
            | CoreError::NoCharging
            | CoreError::NoLocalMaximum { .. }
            | CoreError::WindowOutsideTrace { .. }
            | CoreError::AngleUndefined { .. } => CliError::Analysis(e.to_string()),
        }
    }
}
