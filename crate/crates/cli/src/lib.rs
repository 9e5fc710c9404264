//! Command-line front end for the `obsmask` toolkit.

pub mod commands;
pub mod format;

use std::path::PathBuf;

use thiserror::Error;

pub use commands::{run, Cli, Command, Method};
pub use format::{parse_document, parse_documents, render, render_all, Document};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: expected {expected} values, got {got}")]
    DimensionMismatch { line: usize, expected: usize, got: usize },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: Box<CliError>,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] obsmask::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(obsmask::Error::NumericalFailure(_)) => EXIT_NUMERICAL,
            Self::InFile { source, .. } => source.exit_code(),
            _ => EXIT_BAD_INPUT,
        }
    }
}
