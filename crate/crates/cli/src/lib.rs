//! Batch front end for `fjpop`: problem files, bound reports, relaxations
//! and certificate checks.

pub mod commands;
pub mod problem;

pub use commands::{execute, Cli, Command};
pub use problem::{ProblemFile, ProblemOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Lib(#[from] fjpop::Error),
}

impl CliError {
    pub fn lib(e: impl Into<fjpop::Error>) -> Self {
        CliError::Lib(e.into())
    }
}

/// What a command reports to the process.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Every solve was optimal, or the certificate passed.
    Success,
    /// A solve stopped short of optimality, or a check failed.
    Incomplete,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Incomplete => 1,
        }
    }
}
