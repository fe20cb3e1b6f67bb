use std::io;

use thiserror::Error;

/// Errors raised by the library. Each variant maps to one CLI exit class.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("rank deficient: expected rank {expected}, found {found}")]
    Rank { expected: usize, found: usize },
    #[error("capacity exceeded: {what} needs 2^{log2_size} entries, cap is 2^{cap}")]
    Capacity {
        what: &'static str,
        log2_size: usize,
        cap: usize,
    },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
