use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Param { name: &'static str, reason: String },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("inconsistent weights for pair ({u}, {v}): {first} vs {second}")]
    Consistency {
        u: String,
        v: String,
        first: f64,
        second: f64,
    },

    #[error("structure error: {0}")]
    Structure(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("dead end at node {node}: no outgoing weight")]
    DeadEnd { node: usize },

    #[error("no injective homomorphism reached after {rejections} rejected states{context}")]
    Mixing { rejections: usize, context: String },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("metric undefined: {0}")]
    Metric(String),

    #[error("method unavailable: {0}")]
    MethodUnavailable(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Param {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error stems from user input (bad flags, bad files,
    /// unsuitable graphs) rather than an internal failure.
    pub fn is_user_error(&self) -> bool {
        !matches!(self, Error::Numeric(_) | Error::Capacity(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
