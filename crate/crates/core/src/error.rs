use std::io;

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("config parse error at {path} (line {line}, column {column}): {message}")]
    ConfigParse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("vertex {0} out of range (graph has {1} vertices)")]
    VertexOutOfRange(usize, usize),

    #[error("invalid coloring: vertices {0} and {1} are adjacent but share color {2}")]
    InvalidColoring(u32, u32, u32),

    #[error("graph has {size} vertices, exhaustive search is limited to {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("{needed} distinct evaluation points needed but GF(2^{bits}) only has {available}; use the 16-bit field")]
    FieldTooSmall {
        needed: usize,
        available: usize,
        bits: u32,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("decoding failed for user {user}: {reason}")]
    DecodeFailure { user: usize, reason: String },

    #[error("malformed {format}: {message}")]
    Malformed { format: &'static str, message: String },

    #[error("invariant breach: {0}")]
    InvariantBreach(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn malformed(format: &'static str, msg: impl Into<String>) -> Self {
        Error::Malformed {
            format,
            message: msg.into(),
        }
    }

    /// True for errors caused by a bad configuration document.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_) | Error::ConfigParse { .. } | Error::TooLarge { .. }
        )
    }

    /// True for errors that indicate a broken internal invariant.
    pub fn is_invariant_breach(&self) -> bool {
        matches!(
            self,
            Error::InvariantBreach(_) | Error::DecodeFailure { .. } | Error::InvalidColoring(..)
        )
    }
}

/// Deserializes JSON, reporting the failing field path and position.
pub(crate) fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::ConfigParse {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })
}
