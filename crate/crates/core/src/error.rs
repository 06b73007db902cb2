use thiserror::Error;

/// Errors surfaced by the library and mapped onto CLI exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Input(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("basis size {size} at (m={m}, p={p}) exceeds guard {guard}")]
    Resource {
        m: usize,
        p: usize,
        size: u128,
        guard: usize,
    },
    #[error("not a cocycle at bidegree ({m},{p})")]
    NotCocycle { m: usize, p: usize },
    #[error("{0}")]
    Hypothesis(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }

    /// 2 input, 3 resource, 4 math domain, 5 hypothesis.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Input(_) | Error::Usage(_) => 2,
            Error::Resource { .. } => 3,
            Error::NotCocycle { .. } => 4,
            Error::Hypothesis(_) => 5,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Input(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
