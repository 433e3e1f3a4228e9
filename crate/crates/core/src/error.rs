use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An operation was applied outside its domain (zero inverse, singular
    /// matrix, determinant not a constant unit, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The configuration does not describe a valid backend.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A structural theorem about stabilizers or the quotient was contradicted
    /// by an exact computation. On a valid configuration this never fires.
    #[error("theorem violated ({check}): {detail}")]
    TheoremViolation { check: &'static str, detail: String },

    /// A computation could not be completed within its configured bound.
    #[error("unresolved: {0}")]
    Unresolved(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn violation(check: &'static str, detail: impl Into<String>) -> Self {
        Error::TheoremViolation { check, detail: detail.into() }
    }
}
