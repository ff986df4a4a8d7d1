use thiserror::Error;

/// Errors raised by the computational core.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group order {order} exceeds the configured bound {bound}")]
    OrderBoundExceeded { order: String, bound: u64 },

    #[error("{count} Sylow subgroups exceed the subset-enumeration guard of {guard}")]
    TooManySylows { count: usize, guard: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("cannot parse group spec: {0}")]
    GroupSpec(String),

    #[error("cochain is not a cocycle")]
    NotCocycle,

    #[error("tuple entries do not pairwise commute")]
    NotCommuting,

    #[error("function is not a class function: values differ on conjugate elements")]
    NotClassFunction,

    #[error("series is not a unit: constant coefficient must be 1")]
    NotUnit,

    #[error("constraint mismatch: {0}")]
    ConstraintMismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("engines disagree: {0}")]
    EngineDisagreement(String),
}

impl Error {
    /// Errors caused by hitting a size guard rather than by bad input.
    pub fn is_bound(&self) -> bool {
        matches!(
            self,
            Error::OrderBoundExceeded { .. } | Error::TooManySylows { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
