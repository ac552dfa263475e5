use thiserror::Error;

use commbench_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Parse { path: String, source: CoreError },

    #[error("numerical failure: {0}")]
    Numerical(CoreError),

    #[error("{0}")]
    Io(String),
}

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Usage(_) | BenchError::Io(_) => 1,
            BenchError::Parse { .. } => 2,
            BenchError::Numerical(_) => 3,
        }
    }

    /// Maps a core error raised while running an algorithm or embedding.
    pub fn from_core(err: CoreError) -> Self {
        match err {
            CoreError::InvalidArgument(msg) => BenchError::Usage(msg),
            CoreError::Io(msg) => BenchError::Io(msg),
            other => BenchError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for BenchError {
    fn from(err: std::io::Error) -> Self {
        BenchError::Io(err.to_string())
    }
}

pub type BenchResult<T> = Result<T, BenchError>;
