use std::io;

use thiserror::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    File { path: String, source: lll::Error },

    #[error(transparent)]
    Core(#[from] lll::Error),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let core = match self {
            CliError::Usage(_) | CliError::Io(_) => return EXIT_USAGE,
            CliError::File { source, .. } => source,
            CliError::Core(e) => e,
        };
        match core {
            lll::Error::Parse { .. } | lll::Error::Json(_) => EXIT_PARSE,
            lll::Error::Indeterminate(_) => EXIT_INDETERMINATE,
            lll::Error::InvalidColoring(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        }
    }
}
