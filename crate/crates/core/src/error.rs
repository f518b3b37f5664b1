use thiserror::Error;

/// Errors raised by the apseq library.
///
/// Variants fall into three classes that the command-line front end maps to
/// distinct exit codes: invalid input, exceeded budgets, and broken internal
/// invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid set specification `{0}`")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("element {0} is not a member of the set")]
    NotAMember(String),
    #[error("index {index} out of range for a set of {size} elements")]
    IndexOutOfRange { index: u64, size: u64 },
    #[error("operation `{op}` is not defined for the {family} family")]
    UnsupportedFamily {
        op: &'static str,
        family: &'static str,
    },
    #[error("{what} exceeds the configured cap ({value} > {cap})")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("sequence is not an ordering: {0}")]
    NotAnOrdering(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::Overflow(_))
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_) | Error::Io(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
