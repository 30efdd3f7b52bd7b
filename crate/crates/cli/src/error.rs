use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid problem file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] polyball::Error),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl CliError {
    /// `1` for input and validation errors, `2` for internal inconsistencies.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_internal() => 2,
            CliError::Inconsistency(_) => 2,
            _ => 1,
        }
    }
}
