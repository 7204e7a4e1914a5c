//! Crate-wide error type.

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("characteristic must be prime, got {0}")]
    NonPrime(u64),
    #[error("field size {q} exceeds the table cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("character order {r} does not divide q - 1 = {qm1}")]
    BadCharOrder { r: u64, qm1: u64 },
    #[error("character exponent is undefined at zero")]
    CharAtZero,
    #[error("invalid invariant factors: {0}")]
    InvalidGroup(String),
    #[error("group order {order} exceeds the subgroup-lattice cap {cap}")]
    GroupTooLarge { order: u64, cap: u64 },
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("enumeration budget exceeded: estimated {estimated} items > limit {limit}")]
    BudgetExceeded { estimated: u128, limit: u128 },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
