use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot mix grid and continuous points in one predicate")]
    MixedModes,
    #[error("segment endpoints coincide")]
    CoincidentPoints,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("grid side K={0} is outside the supported range [2, 2^30]")]
    BadGridSide(u64),
    #[error("point ({x}, {y}) lies outside the grid of side {k}")]
    PointOutsideGrid { x: i64, y: i64, k: u64 },
    #[error("coordinate {0} lies outside the unit square")]
    CoordinateOutOfRange(f64),
    #[error("duplicate grid point ({x}, {y})")]
    DuplicatePoint { x: u32, y: u32 },
    #[error("{0}")]
    OutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("decode error at bit {pos}: {reason}")]
    Decode { pos: usize, reason: String },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn decode(pos: usize, reason: impl Into<String>) -> Self {
        Error::Decode {
            pos,
            reason: reason.into(),
        }
    }
}
