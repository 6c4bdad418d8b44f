//! Crate-wide error type.

use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different rings")]
    MixedRings,

    #[error("element is not a unit")]
    NotAUnit,

    #[error("{0} is not a certified prime")]
    NotPrime(BigUint),

    #[error("polynomial must be monic of degree >= 1")]
    NotMonic,

    #[error("residue polynomial is reducible{}", match .factor {
        Some(f) => format!(" (witness factor {f:?})"),
        None => String::new(),
    })]
    ReducibleResidue { factor: Option<Vec<BigUint>> },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("generators do not span a free module")]
    NotFree,

    #[error("requested rank {requested} is below the module rank {actual}")]
    RankTooSmall { requested: usize, actual: usize },

    #[error("shape is not dominated by the ambient shape")]
    ShapeNotDominated,

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("enumeration exceeds the configured cap: {0}")]
    TooLarge(String),

    #[error("code has no nonzero codeword")]
    ZeroCode,

    #[error("code projects to zero in the residue field")]
    ZeroProjection,

    #[error("generator rows are linearly dependent")]
    DependentRows,

    #[error("gave up after {trials} trials ({solve_failures} unsolvable systems, {rank_mismatches} rank mismatches)")]
    TrialsExhausted {
        trials: u64,
        solve_failures: u64,
        rank_mismatches: u64,
    },

    #[error("invalid decoder parameters: {0}")]
    InvalidParams(String),
}
