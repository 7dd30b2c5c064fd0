use std::io;

/// Errors produced by the library and mapped onto CLI exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration field is missing, malformed or out of range.
    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    /// A computation produced a non-finite or otherwise unusable value.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The objective refused an evaluation because the trial budget is spent.
    #[error("evaluation budget of {0} exhausted")]
    BudgetExhausted(u64),

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit code for the CLI: 2 config, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Config { .. } | Error::Json(_) => 2,
            Error::Numerical(_) | Error::BudgetExhausted(_) => 3,
            Error::Io(_) | Error::Csv(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
