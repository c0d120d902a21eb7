use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{origin}: {source}")]
    Parse {
        origin: String,
        source: serde_json::Error,
    },
    #[error("{origin}: {message}")]
    Document { origin: String, message: String },
    #[error(transparent)]
    Model(#[from] equivol_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("csv export: {0}")]
    Csv(#[from] csv::Error),
    #[error("json export: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit code: 2 for input problems, 1 for anything detected while
    /// computing.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. }
            | CliError::Parse { .. }
            | CliError::Document { .. }
            | CliError::Usage(_) => 2,
            CliError::Model(e) => match e {
                equivol_core::Error::NotStabilized(_)
                | equivol_core::Error::CountOverflow
                | equivol_core::Error::WeightRangeExceeded { .. }
                | equivol_core::Error::EnumerationBound { .. } => 1,
                _ => 2,
            },
            CliError::Write { .. } | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
