use std::fmt;

use thiserror::Error;

/// Errors raised across the library.
///
/// Every variant carries a stable short code (see [`Error::code`]) which the
/// command-line front end prints alongside the message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("{d} has no square root in Q_{p}")]
    NotResidue { d: String, p: u64 },
    #[error("p-adic precision budget of {budget} digits exhausted")]
    PrecisionExhausted { budget: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different quadratic fields")]
    MixedField,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate quadratic relation (all coefficients vanish)")]
    DegenerateRelation,
    #[error("zero polynomial has no height")]
    ZeroPolynomial,
    #[error("polynomial is reducible over Q")]
    ReduciblePolynomial,
    #[error("hypothesis 1 violated at indices {0:?}")]
    HypothesisViolated(Vec<usize>),
    #[error("size limit exceeded: {what} = {got}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("slope is rational")]
    RationalSlope,
    #[error("infeasible family spec: {0}")]
    InfeasibleSpec(String),
    #[error("no root of the relation re-expands to the given period")]
    BranchMismatch,
    #[error("law violated: {0}")]
    ReportsViolation(String),
}

impl Error {
    /// Stable machine-readable code for this error kind.
    pub fn code(&self) -> ErrorCode {
        let s = match self {
            Error::InvalidPrime(_) => "E_PRIME",
            Error::NotResidue { .. } => "E_NOT_RESIDUE",
            Error::PrecisionExhausted { .. } => "E_PRECISION",
            Error::DivisionByZero => "E_DIV_ZERO",
            Error::MixedField => "E_MIXED_FIELD",
            Error::InvalidInput(_) => "E_INPUT",
            Error::Parse(_) => "E_PARSE",
            Error::DegenerateRelation => "E_DEGENERATE",
            Error::ZeroPolynomial => "E_ZERO_POLY",
            Error::ReduciblePolynomial => "E_REDUCIBLE",
            Error::HypothesisViolated(_) => "E_HYPOTHESIS",
            Error::SizeLimit { .. } => "E_SIZE",
            Error::RationalSlope => "E_RATIONAL_SLOPE",
            Error::InfeasibleSpec(_) => "E_INFEASIBLE",
            Error::BranchMismatch => "E_BRANCH",
            Error::ReportsViolation(_) => "E_VIOLATION",
        };
        ErrorCode(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorCode(pub &'static str);

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
