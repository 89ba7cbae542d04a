use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{n} exceeds the size bound {bound}")]
    SizeBound { p: u64, n: u32, bound: u64 },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("points are not distinct")]
    NotDistinct,
    #[error("closed points overlap")]
    OverlappingOrbits,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid lattice vector: {0}")]
    InvalidVector(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid surface model: {0}")]
    InvalidSurface(String),
    #[error("trivial twist parameter: {0}")]
    TrivialTwist(String),
    #[error("conic bundle violates its contract: {0}")]
    ConicBundle(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed input at byte {offset}: {message}")]
    Malformed { offset: usize, message: String },
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
