use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("refusing to write an empty result set to {0}")]
    EmptyRows(PathBuf),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("no {missing} row for {scheme} at {point}")]
    UnmatchedPair {
        scheme: String,
        missing: String,
        point: String,
    },

    #[error("{path}:{line}: {msg}")]
    Config { path: PathBuf, line: usize, msg: String },

    #[error("invalid experiment: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Core(#[from] mjd_core::Error),
}

pub type Result<T> = std::result::Result<T, BenchError>;
