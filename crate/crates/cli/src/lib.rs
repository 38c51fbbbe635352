//! Batch front end: line-oriented file formats for algebras and spaces,
//! DOT rendering of Hasse diagrams, and the subcommand implementations.

pub mod commands;
pub mod format;
pub mod render;

/// Failures are split by exit code: semantic failures (a structure that
/// parses but does not validate, a missing isomorphism, an inapplicable
/// functor) exit with 1; parse and IO problems exit with 2.
#[derive(Debug)]
pub enum CmdError {
    Semantic(String),
    Parse(String),
}

impl CmdError {
    pub fn code(&self) -> i32 {
        match self {
            CmdError::Semantic(_) => 1,
            CmdError::Parse(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Semantic(m) | CmdError::Parse(m) => m,
        }
    }
}

impl From<rmwb_core::Error> for CmdError {
    fn from(e: rmwb_core::Error) -> CmdError {
        CmdError::Semantic(e.to_string())
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> CmdError {
        CmdError::Parse(e.to_string())
    }
}

pub type CmdResult<T> = Result<T, CmdError>;
