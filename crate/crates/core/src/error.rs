use thiserror::Error;

/// Errors raised by the toolkit. Every variant carries enough context to
/// reproduce the failing call.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    BadBase(u64),
    #[error("value {value} does not fit in {len} digits of base {base}")]
    OutOfRange { value: u64, base: u64, len: usize },
    #[error("digit {digit} is not a valid base-{base} digit")]
    BadDigit { digit: u64, base: u64 },
    #[error("exponent {value} outside [0, {max}]")]
    ExponentRange { value: u64, max: u64 },
    #[error("digit vector length {0} must be even")]
    OddLength(usize),
    #[error("characteristic {0} is even; planar functions need odd characteristic")]
    EvenCharacteristic(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {size} exceeds the configured cap {cap}")]
    CapExceeded { size: u64, cap: u64 },
    #[error("{m} does not divide {n}")]
    NotADivisor { m: u32, n: u32 },
    #[error("zero has no discrete logarithm")]
    ZeroLog,
    #[error("the zero function has no algebraic degree")]
    ZeroFunction,
    #[error("table has {got} entries, expected {expected}")]
    TableSize { got: usize, expected: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("construction did not yield a witness: {0}")]
    Construction(String),
    #[error("valuation loop exceeded {0} iterations")]
    ValuationDiverged(usize),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
