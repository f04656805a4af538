use thiserror::Error;

use crate::perm::Permutation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a permutation of 1..{len}: {entries:?}")]
    InvalidPermutation { entries: Vec<u32>, len: usize },

    #[error("permutations must have at least one entry")]
    EmptyPermutation,

    #[error("permutation length {0} exceeds the supported maximum of 255")]
    TooLong(usize),

    #[error("word entries must be distinct positive integers, found {0}")]
    InvalidWordEntry(u64),

    #[error("repeated entry {0} in word")]
    RepeatedEntry(u64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("pattern collection is empty")]
    EmptyCollection,

    #[error("collection is not reduced: {divisor} divides {multiple}")]
    NotReduced { divisor: Permutation, multiple: Permutation },

    #[error("duplicate pattern {0} in collection")]
    DuplicatePattern(Permutation),

    #[error("overlap length {k} out of range 1..={max}")]
    OverlapOutOfRange { k: usize, max: usize },

    #[error("linkage length {n} out of range {min}..{max_exclusive}")]
    LinkageOutOfRange {
        n: usize,
        min: usize,
        max_exclusive: usize,
    },

    #[error("invalid cluster: {0}")]
    InvalidCluster(String),

    #[error("collection is not monotone: {0}")]
    NotMonotone(crate::monotone::MonotoneWitness),

    #[error("invalid pattern bijection: {0}")]
    InvalidBijection(String),

    #[error("series constant term must be 1")]
    BadConstantTerm,

    #[error("coefficient of x^{n} t^{q} times {n}! is not an integer")]
    NonIntegral { n: usize, q: usize },

    #[error("insufficient order: need {needed}, have {available}")]
    InsufficientOrder { needed: usize, available: usize },

    #[error("oracle refused n = {n} above cap {cap} (pass --force to override)")]
    OracleCap { n: usize, cap: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
