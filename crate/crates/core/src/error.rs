use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("incidence error: {0}")]
    Incidence(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("decomposition error: {0}")]
    Decomposition(String),
    #[error("boundary-fiber error: {0}")]
    BoundaryFiber(String),
    #[error("exactness error: {0}")]
    Exactness(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by malformed or inadmissible input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Validation(_)
                | Error::Exactness(_)
                | Error::Json(_)
                | Error::Io(_)
                | Error::Degree(_)
                | Error::Decomposition(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
