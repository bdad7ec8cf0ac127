use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large; at most 65535 is supported")]
    ModulusTooLarge(u64),
    #[error("cube roots need p = 2 (mod 3), got p = {0}")]
    NoUniqueCubeRoot(u32),
    #[error("{0} is not a perfect cube")]
    NotACube(String),
    #[error("determinant {0} is odd, expected twice a cube")]
    OddDeterminant(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degree overflow: {left} + {right} exceeds {dim}")]
    DegreeOverflow {
        left: usize,
        right: usize,
        dim: usize,
    },
    #[error("rank {rank} out of range for subsets of size {d} of {size} elements")]
    RankOutOfRange { rank: usize, size: usize, d: usize },
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("rows are linearly dependent (rank {rank} < {expected})")]
    DegenerateRows { rank: usize, expected: usize },
    #[error("tangent frame spans {got}, expected {expected}")]
    RankDrop { expected: usize, got: usize },
    #[error("support of size {support} cannot hold a {needed}-dimensional subspace")]
    SupportTooSmall { support: usize, needed: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("point constraint {0} is not contained in any extra span")]
    InconsistentConstraint(usize),
    #[error("achieved rank {achieved} exceeds stated target {target}")]
    TargetExceeded { achieved: usize, target: usize },
    #[error("monotone extension needs a certified verdict")]
    NotCertified,
    #[error("tensor parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
