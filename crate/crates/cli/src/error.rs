use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] padic_cf::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {msg}", path.display())]
    BadFile { path: PathBuf, msg: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.code().0,
            CliError::Io { .. } => "E_IO",
            CliError::BadFile { .. } => "E_PARSE",
            CliError::Usage(_) => "E_USAGE",
        }
    }

    /// Broken hypotheses and failed internal checks count as violations;
    /// everything else is a usage or input problem.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(padic_cf::Error::HypothesisViolated(_) | padic_cf::Error::ReportsViolation(_)) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
