use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undefined resultant: zero polynomial argument")]
    UndefinedResultant,
    #[error("order violation: expected n < m, got n = {n}, m = {m}")]
    OrderViolation { n: u64, m: u64 },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("group order {order} exceeds the limit of {limit}")]
    OrderTooLarge { order: usize, limit: usize },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid cayley table: {0}")]
    InvalidTable(String),
    #[error("measure of zero")]
    MeasureOfZero,
    #[error("measure computation too large: {0}")]
    TooLarge(String),
    #[error("unfactored cofactor {0}: supply the factorization")]
    UnfactoredCofactor(String),
    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),
    #[error("invalid witness parameters: {0}")]
    InvalidWitness(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("search space of {states} states exceeds the limit of {limit}; try a smaller window")]
    StateSpaceOverflow { states: u128, limit: u128 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
