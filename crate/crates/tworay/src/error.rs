//! Crate-wide error type.

use std::fmt;
use std::path::PathBuf;

#[derive(Debug)]
pub enum Error {
    /// A numeric argument is outside its documented range.
    Domain(String),
    /// Structured input (CSV or JSON) could not be parsed. `line` is
    /// 1-based where known.
    Parse {
        line: Option<usize>,
        message: String,
    },
    /// A configuration document failed validation. The message names the
    /// offending field path.
    Config(String),
    /// An input file could not be read.
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub(crate) fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            line: None,
            message: message.into(),
        }
    }

    pub(crate) fn parse_at(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line: Some(line),
            message: message.into(),
        }
    }

    pub(crate) fn config(message: impl Into<String>) -> Self {
        Error::Config(message.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(message) => write!(f, "{message}"),
            Error::Parse {
                line: Some(line),
                message,
            } => write!(f, "line {line}: {message}"),
            Error::Parse {
                line: None,
                message,
            } => write!(f, "{message}"),
            Error::Config(message) => write!(f, "config: {message}"),
            Error::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
