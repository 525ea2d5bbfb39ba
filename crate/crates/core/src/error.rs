use thiserror::Error;

/// Errors raised by the Cantor-set library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cantor set: {0}")]
    InvalidCantorSet(String),

    #[error("{value} is not a member of {set}")]
    NotAMember { value: String, set: String },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("not achievable: {0}")]
    NotAchievable(String),

    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    DegreeTooLarge { degree: u32, cap: u32 },

    #[error("problem size {size} exceeds the exact-solver cap of {cap}")]
    CapExceeded { size: u64, cap: u64 },

    #[error("expanded support of {size} frequencies exceeds the limit of {limit}")]
    SupportTooLarge { size: usize, limit: usize },

    #[error("{size} elements exceed the direct-computation limit of {limit}")]
    LevelTooLarge { size: u64, limit: u64 },

    #[error("Riesz product did not stabilize by k = {max_levels}")]
    Unstable { max_levels: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

impl Error {
    /// True for errors that signal a violated mathematical hypothesis rather
    /// than malformed input.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(self, Error::HypothesisViolated(_) | Error::NotAchievable(_) | Error::Unstable { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
