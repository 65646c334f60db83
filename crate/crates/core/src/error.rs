use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("element is not invertible at the working precision")]
    NotInvertibleAtPrecision,
    #[error("element is not integral (negative shift)")]
    NotIntegral,
    #[error("matrix is singular at the working precision")]
    SingularAtPrecision,
    #[error("Newton iteration left the convergence basin: {0}")]
    OutsideBasin(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("relation violated: {0}")]
    RelationViolated(String),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("point is not in the closed subspace V")]
    NotInV,
    #[error("input is not diagonal")]
    NotDiagonal,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
