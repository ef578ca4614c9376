use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("cannot parse multi-index {0:?}: {1}")]
    ParseMultiIndex(String, &'static str),

    #[error("invalid nested-sum spec: {0}")]
    InvalidSpec(String),

    #[error("multinomial parts sum to {sum}, expected {n}")]
    MultinomialMismatch { n: usize, sum: usize },

    #[error("axis {axis} out of range for arity {arity}")]
    AxisOutOfRange { axis: usize, arity: usize },

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("{what}: {count} exceeds guard of {limit}")]
    GuardExceeded {
        what: &'static str,
        count: u128,
        limit: u128,
    },

    #[error("depth reduction needs depth >= 2")]
    DepthTooSmall,

    #[error("shift hypothesis violated: {0}")]
    ShiftHypothesis(String),

    #[error("series mismatch: {0}")]
    SeriesMismatch(String),

    #[error("substitution image {0} is not a linear form")]
    NonLinearImage(usize),

    #[error("degree bound exhausted")]
    DegreeExhausted,

    #[error("internal error: {0}")]
    Internal(String),
}
