use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] shiftarc::Error),

    #[error("{0}")]
    Usage(String),

    #[error("config: {0}")]
    Config(String),
}

impl CliError {
    /// 2 invalid input, 3 internal consistency breach, 4 non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(shiftarc::Error::AdmissibilityViolation { .. }) => 3,
            CliError::Lib(shiftarc::Error::NoConvergence(_)) => 4,
            _ => 2,
        }
    }
}
