use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition on the arguments does not hold.
    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("index {index} out of range (must be < {limit})")]
    IndexOutOfRange { index: u64, limit: u64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// The job would exceed an enumeration guard. `cost` is the estimated
    /// number of elementary steps, saturated at `u128::MAX`.
    #[error("{what}: estimated cost {cost} exceeds the limit {limit}")]
    Guard {
        what: String,
        cost: u128,
        limit: u128,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn guard(what: impl Into<String>, cost: u128, limit: u128) -> Self {
        Error::Guard {
            what: what.into(),
            cost,
            limit,
        }
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}
