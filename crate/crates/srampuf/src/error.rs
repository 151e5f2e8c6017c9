use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error for configuration, I/O and data-shape failures.
///
/// Domain-specific failure modes that callers match on (decode outcomes,
/// helper-data format violations, reconstruction failures) have their own
/// types next to the operations that produce them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
