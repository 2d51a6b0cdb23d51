use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what}: expected {expected} argument(s), found {found}")]
    Arity { what: String, expected: usize, found: usize },

    #[error("value {0} is not in the carrier of the algebra")]
    OutsideCarrier(String),

    #[error("value {0} is outside [0, 1]")]
    OutOfUnitInterval(String),

    #[error("empty input to {0}")]
    EmptyInput(&'static str),

    #[error("algebra {0} has an infinite carrier")]
    InfiniteCarrier(String),

    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),

    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("ill-formed formula: {0}")]
    IllFormed(String),

    #[error("variable `{0}` is not assigned")]
    Unassigned(String),

    #[error("model has no table for predicate `{0}`")]
    MissingTable(String),

    #[error("layout mismatch: {0}")]
    Layout(String),

    #[error("rule application failed: {0}")]
    Rule(String),

    #[error("size guard exceeded: {what} needs {needed}, limit is {limit}")]
    SizeGuard { what: &'static str, needed: u128, limit: u128 },

    #[error("case budget exhausted after {explored} LP calls (verdict unknown)")]
    CaseBudget { explored: u64 },

    #[error("model violates {axiom} at {tuple:?}")]
    SigmaViolation { axiom: String, tuple: Vec<usize> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}
