use thiserror::Error;

/// Errors raised while loading instances, checking permutations or
/// configuring a run.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: expected an integer, found `{token}`")]
    Parse { line: usize, token: String },

    #[error("truncated instance: expected {expected} matrix tokens, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("instance dimension must be at least 2, got {0}")]
    Dimension(i64),

    #[error("instance weights overflow the 64-bit objective range")]
    Overflow,

    #[error("weights has {found} entries, expected {expected} for n = {n}")]
    WeightCount { n: usize, expected: usize, found: usize },

    #[error("brute force is capped at n = {cap}, instance has n = {n}")]
    TooLarge { n: usize, cap: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
