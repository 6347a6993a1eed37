use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on sizes or indices was not met.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("keys must be pairwise distinct (duplicate found at positions {first} and {second})")]
    DuplicateKey { first: usize, second: usize },

    #[error("rank {rank} is outside 1..={n}")]
    RankOutOfRange { rank: usize, n: usize },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("enumeration of n = {0} refused: supported sizes are 2..=9")]
    EnumerationGuard(usize),

    /// A floating-point quantity violated an algebraic identity by more than
    /// the rounding allowance.
    #[error("internal numeric inconsistency: {0}")]
    Numeric(String),
}
