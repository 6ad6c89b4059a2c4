use thiserror::Error;

/// Errors raised by the model, bounds, association and experiment layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected} {what}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("{what} index {index} out of range (1..={max})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("profile vector is not sorted in descending order")]
    UnsortedProfile,

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("no feasible number of cache states: {0}")]
    NoFeasibleStates(String),

    #[error("exhaustive enumeration over {users} users exceeds the limit of {limit}")]
    EnumerationLimit { users: usize, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 1 for validation failures, 2 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
