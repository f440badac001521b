use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("field too large for validation: {0}")]
    TooLarge(String),
    #[error("scalar does not belong to this field")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("generator `g` used in the prime field F_{0}")]
    GeneratorInPrimeField(u64),
    #[error("bad variable list: {0}")]
    BadVariables(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("exponent overflow (limit 2^63-1)")]
    ExponentOverflow,

    #[error("bad composition for p = {p}: {reason}")]
    BadComposition { p: u64, reason: String },
    #[error("supplied Delta cache does not match Delta(g)")]
    CacheMismatch,
    #[error("bad Frobenius ideal: {0}")]
    BadIdeal(String),

    #[error("polynomial has a constant term")]
    ConstantTerm,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("bad level {0}: levels start at 1 and p^r must fit in 64 bits")]
    BadLevel(u32),
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("resource budget exceeded: {0}")]
    ResourceBudgetExceeded(String),
    #[error("chain multiplier is zero")]
    ZeroMultiplier,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree {degree} does not match the number of variables {vars}")]
    DegreeMismatch { degree: u128, vars: usize },
    #[error("bad prime for this operation: {0}")]
    BadPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
