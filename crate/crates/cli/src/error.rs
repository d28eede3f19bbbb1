use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: cannot read: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}:{line}:{column}: {msg}")]
    Syntax {
        path: PathBuf,
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("{path}: field `{field}`: {msg}")]
    Field {
        path: PathBuf,
        field: String,
        msg: String,
    },

    #[error("{path}:{line}: {msg}")]
    Trace {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Solver(#[from] ef1reform::Error),
}

impl CliError {
    /// 3 when a search ran out of budget, 2 for every input problem.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(ef1reform::Error::BudgetExceeded { .. })
            | CliError::Solver(ef1reform::Error::TooLarge(_)) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
