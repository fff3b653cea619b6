use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} exceeds the table cap of {cap}")]
    TooLarge { p: u64, cap: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("requested {n} elements from a field of size {p}")]
    SizeTooLarge { n: u64, p: u64 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("dilation factor must be non-zero")]
    ZeroDilation,
    #[error("operands live in different fields (p = {0} vs p = {1})")]
    FieldMismatch(u64, u64),
    #[error("output bound {bound} does not fit the exact 127-bit range")]
    OverflowGuard { bound: String },
    #[error("set must be non-empty")]
    EmptySet,
    #[error("the dilation set S must not contain 0")]
    ZeroInS,
    #[error("the dilation set X must not contain 0")]
    ZeroInX,
    #[error("brute-force budget exceeded: {work} > {budget}")]
    BudgetExceeded { work: u128, budget: u128 },
    #[error("set is not an affine image c + λA of the base set")]
    NotAffineImage,
    #[error("arithmetic overflow in {0}")]
    ArithmeticOverflow(&'static str),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
