use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is out of range (need 2 <= m < 2^32)")]
    BadModulus(u64),
    #[error("ring mismatch: Z/{left}Z vs Z/{right}Z")]
    RingMismatch { left: u32, right: u32 },
    #[error("coefficient index {index} is beyond the truncation q^{trunc}")]
    BeyondTruncation { index: usize, trunc: usize },
    #[error("constant term {0} is not a unit")]
    NonUnit(u32),
    #[error("truncation {requested} exceeds the global cap {cap}")]
    TruncationCap { requested: usize, cap: usize },
    #[error("eta quotient prefactor {0}/24 is not an integral power of q")]
    NonIntegralPrefactor(i64),
    #[error("invalid eta quotient: {0}")]
    InvalidEta(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("gcd({a}, {b}) != 1")]
    NotCoprime { a: u64, b: u64 },
    #[error("series is not in the span of the weight {k2}/2 basis: residual at q^{exponent}")]
    NotInSpan { k2: u32, exponent: usize },
    #[error("insufficient truncation: need q^{needed}, have q^{have}")]
    InsufficientTruncation { needed: usize, have: usize },
    #[error("divisibility violated: {0}")]
    Divisibility(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("cache file: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
