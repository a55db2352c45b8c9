use thiserror::Error;

use crate::ffield::FieldId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field of size {size} exceeds the enumeration cap {cap}")]
    FieldTooLarge { size: u128, cap: u64 },
    #[error("characteristic mismatch: {0} vs {1}")]
    CharacteristicMismatch(u32, u32),
    #[error("degree {sub} does not divide degree {sup}")]
    DegreeNotDividing { sub: u32, sup: u32 },
    #[error("element belongs to {found:?}, expected {expected:?}")]
    FieldMismatch { expected: FieldId, found: FieldId },
    #[error("zero has no discrete logarithm")]
    ZeroLog,
    #[error("element is not a generator of the multiplicative group")]
    NotGenerator,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("operation requires a univariate polynomial (got {0} variables)")]
    NotUnivariate(usize),
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid sheaf data: {0}")]
    InvalidSpec(String),
    #[error("exclusion polynomial is not defined over F_q")]
    ExclusionNotDescended,
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("Euler characteristic bookkeeping gave a negative Betti number ({0})")]
    NegativeBetti(i64),
    #[error("Newton recovery inconsistent: {0}")]
    NewtonInconsistent(String),
    #[error("malformed group data: {0}")]
    MalformedGroup(String),
}

pub type Result<T> = std::result::Result<T, Error>;
