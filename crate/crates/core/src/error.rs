use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unbalanced delimiter at byte {0}")]
    UnbalancedDelimiter(usize),
    #[error("unterminated string literal at byte {0}")]
    UnterminatedString(usize),
    #[error("unterminated template literal at byte {0}")]
    UnterminatedTemplate(usize),
    #[error("unterminated comment at byte {0}")]
    UnterminatedComment(usize),
}

impl ParseError {
    pub fn position(&self) -> usize {
        match *self {
            ParseError::UnbalancedDelimiter(p)
            | ParseError::UnterminatedString(p)
            | ParseError::UnterminatedTemplate(p)
            | ParseError::UnterminatedComment(p) => p,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("file has no counterpart in the other tree: {0}")]
    MissingCounterpart(PathBuf),
    #[error("invalid report: {0}")]
    Report(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
