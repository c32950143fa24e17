use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole at {0}")]
    Pole(String),
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("tolerance {requested:e} not reached (estimate {achieved:e})")]
    Tolerance { requested: f64, achieved: f64 },
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("cache rejected: {0}")]
    Cache(String),
    #[error("not supported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
