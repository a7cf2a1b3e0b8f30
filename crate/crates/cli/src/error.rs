use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad config file, flag or preset requirement; exit code 2.
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] halfline_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(halfline_core::Error::InvalidProblem(_))
            | CliError::Core(halfline_core::Error::InvalidGrid(_))
            | CliError::Core(halfline_core::Error::InvalidArgument(_)) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
