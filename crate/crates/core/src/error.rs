use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A query reached past the end of the sieve.
    #[error("{n} is outside the prime table coverage [0, {limit}]")]
    OutOfCoverage { n: u64, limit: u64 },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("{id} is undefined at x = {x}: {reason}")]
    Domain {
        id: String,
        x: f64,
        reason: &'static str,
    },

    #[error("{id} does not change sign on [{lo}, {hi}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    Bracket {
        id: String,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
