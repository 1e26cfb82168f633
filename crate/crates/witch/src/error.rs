use thiserror::Error;

pub type Result<T> = std::result::Result<T, WitchError>;

#[derive(Debug, Error)]
pub enum WitchError {
    #[error(transparent)]
    Core(#[from] witch_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad file contents: {0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
}

impl WitchError {
    /// 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            WitchError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub(crate) fn bad(what: impl Into<String>) -> WitchError {
    WitchError::Format(what.into())
}
