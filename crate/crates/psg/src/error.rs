use std::path::PathBuf;

use psg_core::corpus::CorpusError;
use psg_core::metrics::MetricsError;
use psg_core::model::ModelError;
use psg_core::text::TextError;

use crate::fetch::FetchError;

/// Errors surfaced by the library and mapped to process exit codes by the
/// command line: 1 for usage, 2 for data, 3 for network.
#[derive(Debug, thiserror::Error)]
pub enum PsgError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Fetch(#[from] FetchError),
}

impl PsgError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PsgError::Usage(_) => 1,
            PsgError::Fetch(e) if e.is_network() => 3,
            _ => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        PsgError::Io { path: path.into(), source }
    }
}

pub type Result<T, E = PsgError> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(PsgError::Usage("x".into()).exit_code(), 1);
        assert_eq!(PsgError::Data("x".into()).exit_code(), 2);
        let limited = FetchError::RateLimited { url: "u".into(), attempts: 4 };
        assert_eq!(PsgError::from(limited).exit_code(), 3);
        assert_eq!(PsgError::from(FetchError::Config("x".into())).exit_code(), 2);
    }
}
