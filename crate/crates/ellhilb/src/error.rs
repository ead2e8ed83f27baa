use thiserror::Error;

/// Errors raised by the engine. Each variant names the operation's failed
/// precondition rather than the call site.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a non-monomial in t is not supported")]
    NonMonomialDivision,
    #[error("mismatched truncation orders: {0} vs {1}")]
    TruncationMismatch(u32, u32),
    #[error("logarithm needs constant term 1, found {0}")]
    LogConstantTerm(String),
    #[error("q^0 part has a non-positive p-exponent {0}/2 (wrong expansion direction)")]
    NonPositiveLeadingExponent(i64),
    #[error("exponential needs zero constant term")]
    ExpConstantTerm,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown surface '{0}'")]
    UnknownSurface(String),
    #[error("inconsistent surface model: {0}")]
    InvalidSurface(String),
    #[error("degenerate pairing")]
    DegeneratePairing,
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("inhomogeneous vector")]
    Inhomogeneous,
    #[error("codimension mismatch: integrand has {have}, space has {want}")]
    Codimension { have: i64, want: i64 },
    #[error("invalid double ramification profile: {0}")]
    InvalidProfile(String),
    #[error("underdetermined system: {equations} equations for {unknowns} unknowns")]
    Underdetermined { equations: usize, unknowns: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
