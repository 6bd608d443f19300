use thiserror::Error;

/// Errors raised by field construction, the census engine and the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("extension degree t must be at least 1")]
    ZeroDegree,

    #[error("degree r = {0} is below 3; projective sets need degree at least 3")]
    DegenerateDegree(u32),

    #[error("field of {p}^{t} elements is too large for table-driven arithmetic")]
    FieldTooLarge { p: u64, t: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("{what}: {needed} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        needed: String,
        cap: u64,
    },

    #[error("case precondition violated: {0}")]
    CaseViolation(String),

    #[error("Burnside sum {sum} is not divisible by r = {r} ({action} action)")]
    IntegralityViolation {
        action: &'static str,
        sum: String,
        r: u32,
    },

    #[error("inexact division at {site}: {numerator} / {denominator}")]
    InexactDivision {
        site: &'static str,
        numerator: String,
        denominator: String,
    },

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("singular matrix")]
    SingularMatrix,
}

pub type Result<T> = std::result::Result<T, Error>;
