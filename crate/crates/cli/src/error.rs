use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] qfsplit_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 3 for budget exhaustion, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(qfsplit_core::Error::ResourceBudgetExceeded(_)) => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
