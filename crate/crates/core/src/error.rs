use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: vertex index {index} out of bounds for n = {n}")]
    Bounds { line: usize, index: usize, n: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("infeasible held-out split: {0}")]
    InfeasibleSplit(String),

    #[error("AUC is undefined without both positive and negative labels")]
    UndefinedAuc,

    #[error("malformed trace: {0}")]
    Trace(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
