//! Command-line front end: configuration files, result artifacts and plots.

pub mod config;
pub mod output;
pub mod plot;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },

    #[error("invalid configuration: {0}")]
    Validation(cellfree_oas::Error),

    #[error(transparent)]
    Simulation(#[from] cellfree_oas::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Csv { path: PathBuf, message: String },

    #[error("plot: {0}")]
    Plot(String),
}
