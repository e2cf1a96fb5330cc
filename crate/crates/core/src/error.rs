use thiserror::Error;

use crate::validate::Violation;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range problem data.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A grid or solver parameter combination that cannot be used.
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument outside the domain of an operator.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    /// A schedule that was required to be feasible is not.
    #[error("infeasible schedule: {0}")]
    Infeasible(Violation),

    /// The operation declines to run (e.g. an oracle size guard).
    #[error("refused: {0}")]
    Refused(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
