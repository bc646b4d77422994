use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: F_{left} vs F_{right}")]
    FieldMismatch { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("insufficient shares: need {needed}, got {got}")]
    InsufficientShares { needed: usize, got: usize },

    #[error("shares are inconsistent: no polynomial of degree < {degree_bound} fits all of them")]
    InconsistentShares { degree_bound: usize },

    #[error("corrupted state: conflicting subshares for point {point}")]
    Corruption { point: usize },

    #[error("design is not repairable: point {point} occurs in fewer than two blocks")]
    NotRepairable { point: usize },

    #[error("distribution profile unusable: ell1 = {ell1} is not below ell2 = {ell2}")]
    Profile { ell1: usize, ell2: usize },

    #[error("enumeration of {size} cases exceeds the guard of {guard}")]
    TooLarge { size: u128, guard: u128 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
