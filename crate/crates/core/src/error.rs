use std::path::PathBuf;

/// Broad classification used by front ends to pick an exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input, unreadable files, violated preconditions.
    Input,
    /// Parameters for which no construction exists on the horizon.
    Infeasible,
    /// The horizon ran out before a construction could take its first step.
    Exhausted,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("count requested at n = {n} beyond horizon {horizon}")]
    OutOfRange { n: u64, horizon: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("rate expression: {0}")]
    Expr(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("not highly sparse: {0}")]
    NotSparse(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("horizon exhausted: {0}")]
    Exhausted(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Infeasible(_) => ErrorKind::Infeasible,
            Error::Exhausted(_) => ErrorKind::Exhausted,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
