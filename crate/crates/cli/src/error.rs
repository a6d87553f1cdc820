use std::path::PathBuf;

use mvb::MvbError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed data file, with its location.
    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] MvbError),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Input(_) => "input",
            CliError::Core(e) => e.code(),
        }
    }

    /// 2 for numerical failures, 1 for everything the user can fix by
    /// changing the invocation or the input files.
    pub fn exit_status(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numeric() => 2,
            _ => 1,
        }
    }

    /// The single `ERROR:<code>:<message>` line written to standard error.
    pub fn report_line(&self) -> String {
        let msg = self.to_string().replace('\n', " ");
        format!("ERROR:{}:{}", self.code(), msg)
    }
}

pub type CliResult<T> = Result<T, CliError>;
