use thiserror::Error;

/// Exit status for input errors, including violated preconditions.
pub const EXIT_INPUT: u8 = 2;
/// Exit status when `--strict` meets an uncertified result.
pub const EXIT_UNCERTIFIED: u8 = 3;
/// Exit status for internal consistency failures.
pub const EXIT_INTERNAL: u8 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] floergrowth_core::Error),
    #[error("uncertified result: {0}")]
    Uncertified(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Core(floergrowth_core::Error::Internal(_)) => EXIT_INTERNAL,
            CliError::Core(_) => EXIT_INPUT,
            CliError::Uncertified(_) => EXIT_UNCERTIFIED,
        }
    }
}
