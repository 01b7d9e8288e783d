use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid base {0}: must be at least 2")]
    InvalidBase(u64),
    #[error("element is not invertible: its norm shares a factor with {base}")]
    NotInvertible { base: u64 },
    #[error("exact oracle limited to base <= {limit}, got {base}")]
    OracleLimitExceeded { base: u64, limit: u64 },
    #[error("{what} = {value} exceeds the configured limit {limit}")]
    LimitExceeded {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("value is not {p}-integral")]
    NotPIntegral { p: u64 },
    #[error("{n} is not congruent to 1 or 5 mod 6")]
    BadResidueClass { n: u64 },
    #[error("malformed binomial spec: {0}")]
    MalformedSpec(String),
    #[error("polynomial is zero")]
    EmptyPolynomial,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
