use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for a failed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Validation = 1,
    Io = 2,
    Numerical = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: line {line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: missing column `{column}`", path.display())]
    MissingColumn { path: PathBuf, column: String },
    #[error("{}: column `{column}` is not declared in the schema", path.display())]
    UnexpectedColumn { path: PathBuf, column: String },
    #[error("{}: record {record}, column `{column}`: cannot parse `{value}` as a number", path.display())]
    UnparseableCell {
        path: PathBuf,
        record: usize,
        column: String,
        value: String,
    },
    #[error("{}: record {record}, column `{column}`: level `{value}` is not in the schema", path.display())]
    UnknownLevel {
        path: PathBuf,
        record: usize,
        column: String,
        value: String,
    },
    #[error("{}: record {record}, column `{column}`: missing value", path.display())]
    MissingValue {
        path: PathBuf,
        record: usize,
        column: String,
    },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: {source}", path.display())]
    Toml {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("{context}: {source}")]
    Model {
        context: String,
        source: bistochastic::Error,
    },
    #[error("{}: estimator unavailable: matrix singular (identical or dependent rows erase the information needed to recover the original frequencies)", path.display())]
    EstimatorUnavailable { path: PathBuf },
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn model(context: impl Into<String>, source: bistochastic::Error) -> Self {
        CliError::Model {
            context: context.into(),
            source,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io { .. } => ExitCode::Io,
            CliError::Csv { source, .. } if source.is_io_error() => ExitCode::Io,
            CliError::EstimatorUnavailable { .. } => ExitCode::Numerical,
            CliError::Model {
                source:
                    bistochastic::Error::SingularMatrix | bistochastic::Error::NoPerfectMatching { .. },
                ..
            } => ExitCode::Numerical,
            _ => ExitCode::Validation,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
