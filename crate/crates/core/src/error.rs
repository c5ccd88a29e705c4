use thiserror::Error;

/// Errors raised while building distributions or evaluating transformations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distribution is empty")]
    Empty,
    #[error("value at index {index} is not finite")]
    NonFinite { index: usize },
    #[error("negative mass {value} at index {index}")]
    NegativeMass { index: usize, value: f64 },
    #[error("value {value} at index {index} lies outside [0, 1]")]
    OutOfUnitRange { index: usize, value: f64 },
    #[error("masses sum to {sum}, expected 1")]
    SumOutOfTolerance { sum: f64 },
    #[error("possibility distribution is not normalized (max = {max})")]
    NotNormalized { max: f64 },
    #[error("possibility of the empty set is undefined")]
    EmptySubset,
    #[error("outcome index {index} out of range for {len} outcomes")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("outcome index {index} appears more than once")]
    DuplicateIndex { index: usize },
    #[error("exponent must be a positive real, got {0}")]
    InvalidExponent(f64),
    #[error("the converse of the optimal transformation must be used for an infinite exponent")]
    InfiniteExponent,
    #[error("invalid ordering: {0}")]
    InvalidOrder(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("fuzzy set has zero cardinality")]
    ZeroCardinality,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
