use thiserror::Error;

/// Errors raised by the arithmetic kernels and the verification harness.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("exponent {t} is not coprime to the root-of-unity order {order}")]
    NotCoprime { t: i64, order: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {q} exceeds the table cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("element {0} is not a primitive element of the field")]
    NotPrimitive(u32),
    #[error("character denominator {den} does not divide q - 1 = {q_minus_one}")]
    CharacterOrder { den: u32, q_minus_one: u64 },
    #[error("invalid exponent vector: {0}")]
    InvalidExponent(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid variety: {0}")]
    InvalidVariety(String),
    #[error("prime {p} is bad for {what}")]
    BadPrime { p: u64, what: String },
    #[error("canonical generator convention failed: {0}")]
    Convention(String),
    #[error("series error: {0}")]
    Series(String),
    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
    #[error("recipe parse error: {0}")]
    Parse(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
