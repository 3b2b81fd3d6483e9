use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller supplied arguments outside an operation's domain.
    #[error("invalid input: {0}")]
    Input(String),

    /// A data file did not parse under its declared format.
    #[error("{path}:{line}: {msg}")]
    Format {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    /// Some element of a set-cover instance lies in no set.
    #[error("instance is not coverable: element {0} belongs to no set")]
    Uncoverable(usize),

    /// The exhaustive oracle was asked to solve an instance above its size cap.
    #[error("exact oracle refuses instance with {n} points (cap {cap})")]
    OracleCap { n: usize, cap: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn format(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
