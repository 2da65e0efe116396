use thiserror::Error;

/// Errors surfaced by the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    /// The sampled instance sits (numerically) on a discriminant locus: a
    /// multiple root, a non-Lefschetz restriction or a failed residual
    /// certificate. Callers discard the trial and move to the next index.
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    #[error("polynomials live in different spaces or degrees: {0}")]
    Mismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateInstance(msg.into())
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::DegenerateInstance(_))
    }
}
