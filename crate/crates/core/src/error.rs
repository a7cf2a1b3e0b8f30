use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("blow-up of the flat ODE at t = {time}")]
    FlatBlowUp { time: f64 },

    #[error("no bracket found: {0}")]
    NoBracket(String),

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("condition violated: {0}")]
    ConditionViolated(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
