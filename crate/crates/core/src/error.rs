use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("input symbol {0:#04x} is reserved as the separator")]
    ReservedSymbol(u8),

    #[error("malformed file: {0}")]
    Format(String),

    #[error("unsupported format version '{found}' (expected '{expected}')")]
    UnsupportedVersion { expected: char, found: char },

    #[error("assembly failed: {0}")]
    Assembly(String),

    #[error("internal error in {stage}: {msg}")]
    Internal { stage: &'static str, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
