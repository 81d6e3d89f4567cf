use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] prset_core::Error),
    #[error("{0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type LabResult<T> = Result<T, LabError>;

impl LabError {
    pub fn config(msg: impl Into<String>) -> LabError {
        LabError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> LabError {
        LabError::Io { path: path.into(), source }
    }

    /// 1 for anything the user can fix in the configuration, 2 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Io { .. } | LabError::Pool(_) => 2,
            LabError::Csv { source, .. } if source.is_io_error() => 2,
            _ => 1,
        }
    }
}
