//! Library side of the `eigpert` command-line tool: matrix files, reports
//! and command implementations.

pub mod commands;
pub mod matfile;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] eigpert::Error),
}
