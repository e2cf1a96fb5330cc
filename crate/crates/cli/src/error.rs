use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] bucketsched::Error),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }

    /// 0 success, 1 usage, 2 infeasible or refused, 3 internal.
    pub fn exit_code(&self) -> i32 {
        use bucketsched::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(E::InvalidInput(_) | E::Config(_) | E::Domain(_) | E::Parse { .. }) => 1,
            CliError::Core(E::Infeasible(_) | E::Refused(_)) => 2,
            CliError::Core(E::Io(_)) | CliError::Io { .. } | CliError::Internal(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
