use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate range for channel `{0}` (max == min)")]
    DegenerateRange(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("unsupported checkpoint version {found} (expected {expected})")]
    UnsupportedVersion { found: u64, expected: u64 },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Prefixes the message with `context` (e.g. a run index or epoch),
    /// keeping the error kind.
    pub fn context(self, context: impl std::fmt::Display) -> Self {
        match self {
            Error::Config(m) => Error::Config(format!("{context}: {m}")),
            Error::Shape(m) => Error::Shape(format!("{context}: {m}")),
            Error::Index(m) => Error::Index(format!("{context}: {m}")),
            Error::Validation(m) => Error::Validation(format!("{context}: {m}")),
            Error::Parse(m) => Error::Parse(format!("{context}: {m}")),
            Error::Domain(m) => Error::Domain(format!("{context}: {m}")),
            Error::Numeric(m) => Error::Numeric(format!("{context}: {m}")),
            Error::Usage(m) => Error::Usage(format!("{context}: {m}")),
            other => other,
        }
    }

    /// Process exit code for the CLI: 1 usage, 2 data validation, 3 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Numeric(_) => 3,
            _ => 2,
        }
    }
}

pub(crate) fn shape_err(what: impl Into<String>) -> Error {
    Error::Shape(what.into())
}
