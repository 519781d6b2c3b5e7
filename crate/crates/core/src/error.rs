use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree d = {0} is not supported (need d >= 3)")]
    Degree(usize),

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("parity constraint violated: {0}")]
    Parity(String),

    #[error("spectral parameter outside the upper half-plane or domain: {0}")]
    SpectralDomain(String),

    #[error("rejection limit of {limit} exceeded while sampling n = {n}, d = {d}")]
    RejectionLimit { n: usize, d: usize, limit: usize },

    #[error("matrix is numerically singular (condition estimate {cond:e})")]
    Singular { cond: f64 },

    #[error("resonance: {0}")]
    Resonance(String),

    #[error("size limit exceeded: {size} > {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("switching conflict: {0}")]
    Conflict(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid configuration: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
