use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RANK: i32 = 3;
pub const EXIT_EMPTY_SUPPORT: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{file}: row {row}, column {column}: {message}")]
    Parse {
        file: PathBuf,
        row: usize,
        column: usize,
        message: String,
    },
    #[error("{file}: {message}")]
    Input { file: PathBuf, message: String },
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Core(#[from] sindy_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use sindy_core::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Input { .. } | CliError::Config(_) | CliError::Io { .. } => EXIT_CONFIG,
            CliError::Core(E::RankDeficient { .. }) => EXIT_RANK,
            CliError::Core(
                E::DimensionMismatch(_)
                | E::NonFinite(_)
                | E::InvalidParameter(_)
                | E::TooManyColumns { .. }
                | E::TooFewSamples { .. },
            ) => EXIT_CONFIG,
            CliError::Core(_) => EXIT_FAILURE,
        }
    }
}
