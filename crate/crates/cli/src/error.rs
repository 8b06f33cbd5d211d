use std::path::PathBuf;

use pfilter::LayerViolation;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: {message}", path.display())]
    Content { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{}: invalid partition: {}", path.display(), join(violations))]
    Partition {
        path: PathBuf,
        violations: Vec<LayerViolation>,
    },
    #[error(transparent)]
    Library(#[from] pfilter::Error),
    #[error("{0}")]
    CheckFailed(String),
}

fn join(violations: &[LayerViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl CliError {
    /// Process exit status: 1 check failure, 2 input error, 3 validation error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::CheckFailed(_) => 1,
            Self::Partition { .. } | Self::Library(pfilter::Error::InvalidLayer(_)) => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
