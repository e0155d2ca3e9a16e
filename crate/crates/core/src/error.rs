use thiserror::Error;

/// Errors produced by the automaton toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid automaton: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("component bit length {bits} exceeds cap of {cap} bits at tick {tick}")]
    BitCapExceeded { bits: u64, cap: u64, tick: i64 },

    #[error("polynomial degree {0} exceeds the supported maximum of 3")]
    DegreeTooHigh(u32),

    #[error("invalid variation: {0}")]
    InvalidVariation(String),

    #[error("no real stationary energy: |epsilon| = {epsilon} exceeds the band bound 2")]
    NoRealEnergy { epsilon: f64 },

    #[error("empty sample set")]
    EmptySamples,

    #[error("matrix is not {0}")]
    NotHermitian(&'static str),

    #[error("search space of {size} candidates exceeds the limit of {limit}")]
    SearchSpaceOverflow { size: u128, limit: u128 },

    #[error("no solution within bound {0}")]
    NoSolutionInBound(i64),

    #[error("non-unique stationary solution: {0}")]
    NonUnique(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
