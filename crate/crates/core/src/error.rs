use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid session parameters: {0}")]
    InvalidParams(String),
    #[error("denominator p^{depth} exceeds the cyclotomic order p^{max}")]
    DenominatorTooDeep { depth: u32, max: u32 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("matrix is not invertible modulo p")]
    NotInvertibleAtPrecision,
    #[error("element is not in the lattice: {0}")]
    NotInLattice(String),
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("quotient mismatch: {0}")]
    QuotientMismatch(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("quotient too large for dense measures: {0} elements")]
    QuotientTooLarge(u64),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
