use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty range: {0}")]
    EmptyRange(String),

    #[error("prime table up to {limit} cannot serve {needed}")]
    Capability { limit: u64, needed: u64 },

    #[error("input {0} exceeds 2^63 - 1")]
    TooLarge(u64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("variable index {index} out of range 1..={vars}")]
    IndexOutOfRange { index: usize, vars: usize },

    #[error("polynomial parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("invalid additive function: {0}")]
    InvalidFunction(String),

    #[error("B_Q vanishes; normalization undefined")]
    ZeroVariance,

    #[error("variance radicand {0} is negative")]
    NegativeRadicand(f64),

    #[error("accumulator configuration mismatch: {0}")]
    ConfigMismatch(String),

    #[error("combinatorial blowup: {0}")]
    TooLargeInstance(String),
}
