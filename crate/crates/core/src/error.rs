use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall into three groups that the command-line front end maps to
/// distinct exit codes: usage problems, domain errors (an input outside the
/// region where an operation is defined) and internal inconsistencies (two
/// parts of the library disagreeing, which indicates a bug).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid exponent {0}: exponents must be >= 1 or inf")]
    InvalidExponent(String),

    #[error("non-finite entry at index {index}")]
    NonFiniteEntry { index: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("triple ({p}, {q}, {r}) violates the Hoelder condition 1/r <= 1/p + 1/q")]
    HolderInvalid { p: String, q: String, r: String },

    #[error(
        "exhaustive enumeration over {n} items exceeds the limit of {limit}; use randomized mode"
    )]
    TooLargeForExhaustive { n: usize, limit: usize },

    #[error("degenerate family: {0}")]
    Degenerate(&'static str),

    #[error("empty budget")]
    EmptyBudget,

    #[error("{0}")]
    Precondition(String),

    #[error("second-clause condition not satisfied: 1/2 + 1/r = {lhs} is not strictly greater than 1/p + 1/min(2,q) = {rhs}")]
    StrictClauseNotSatisfied { lhs: f64, rhs: f64 },

    #[error("C too large for desk scale: would need n = {needed} > {cap}")]
    ConstantTooLarge { needed: u64, cap: u32 },

    #[error("B = {b} needs more than {cap} terms")]
    TailTooLong { b: f64, cap: u64 },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidExponent(_) => "invalid_exponent",
            Error::NonFiniteEntry { .. } => "non_finite_entry",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::HolderInvalid { .. } => "holder_invalid",
            Error::TooLargeForExhaustive { .. } => "too_large_for_exhaustive",
            Error::Degenerate(_) => "degenerate",
            Error::EmptyBudget => "empty_budget",
            Error::Precondition(_) => "precondition",
            Error::StrictClauseNotSatisfied { .. } => "strict_clause_not_satisfied",
            Error::ConstantTooLarge { .. } => "constant_too_large",
            Error::TailTooLong { .. } => "tail_too_long",
            Error::InternalInconsistency(_) => "internal_inconsistency",
            Error::Usage(_) => "usage",
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InternalInconsistency(_))
    }

    /// The input is valid but the construction exceeds desk-scale limits.
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            Error::ConstantTooLarge { .. } | Error::TailTooLong { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
