use thiserror::Error;

/// Errors raised by the exact engine and the numeric flow.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("degree overflow: {0}")]
    DegreeOverflow(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("form is not closed: {0}")]
    NotClosed(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("denominator is not invariant under the action: {0}")]
    NonInvariantDenominator(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("expected a horizontal form: {0}")]
    NotHorizontal(String),
    #[error("not a coupling structure: {0}")]
    NotCoupling(String),
    #[error("geometric data must pass the structure equations first")]
    Unverified,
    #[error("rank deficient frame: {0}")]
    RankDeficient(String),
    #[error("too few usable sample points: {usable} of {total}")]
    TooFewPoints { usable: usize, total: usize },
    #[error("numeric guard tripped: {0}")]
    NumericGuard(String),
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
    #[error("invalid certificate: {0}")]
    Certificate(String),
    #[error("model: {0}")]
    Spec(String),
    #[error("flow: {0}")]
    Flow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
