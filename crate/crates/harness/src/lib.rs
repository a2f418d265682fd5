//! File formats, experiment commands and benchmarks around [`sigmax_core`].
//!
//! Every file format is plain text. Social graphs and action logs are TSV,
//! models are JSON lines, reports are JSON or two-column CSV. See the README
//! for the byte-level layout of each.

pub mod cli;
pub mod io;
pub mod metrics;
pub mod parallel;
pub mod report;
pub mod synth;

use std::path::PathBuf;

use thiserror::Error;

/// Process exit code for input and validation failures.
pub const EXIT_VALIDATION: i32 = 2;
/// Process exit code when a configured cap (enumeration, combinations,
/// hyperedge size) is exceeded.
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] sigmax_core::Error),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl HarnessError {
    pub fn parse(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Self::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use sigmax_core::Error as E;
        match self {
            Self::Core(E::EnumerationCap { .. } | E::CombinationCap { .. } | E::HyperedgeSizeLimit { .. }) => EXIT_CAP,
            _ => EXIT_VALIDATION,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
