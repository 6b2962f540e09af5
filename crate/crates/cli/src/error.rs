use filcol_core::Error as CoreError;

/// Failure of a command, carrying its process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigInvalid(_) => 2,
            CliError::NumericalFailure(_) => 3,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::ConfigInvalid(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        CliError::NumericalFailure(msg.into())
    }
}

/// Errors caused by the inputs map to exit 2, everything else to exit 3.
impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParams(_)
            | CoreError::InvalidState(_)
            | CoreError::SeparationZero
            | CoreError::OnSingularLine
            | CoreError::RegimeError(_)
            | CoreError::DomainError(_)
            | CoreError::OffLevelSet { .. }
            | CoreError::InvalidInitialState(_) => CliError::ConfigInvalid(e.to_string()),
            CoreError::Divergent
            | CoreError::InversionFailure
            | CoreError::RootNotFound(_)
            | CoreError::StepLimitExceeded { .. }
            | CoreError::EmptyTrajectory => CliError::NumericalFailure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::NumericalFailure(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
