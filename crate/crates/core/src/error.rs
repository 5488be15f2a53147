use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A step could not be formed (zero denominator, missing derivative, ...).
    #[error("breakdown: {0}")]
    Breakdown(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("evaluation at pole {pole} (x = {x})")]
    PoleHit { x: f64, pole: f64 },

    #[error("quadratic has no real roots (discriminant {0})")]
    NoRealRoots(f64),

    #[error("leading coefficient is zero; the equation is linear")]
    DegenerateLinear,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("no convergence after {0} iterations")]
    MaxIters(usize),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid bracket [{lo}, {hi}]: endpoint signs do not differ")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("no root found: {0}")]
    NoRootFound(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Problem data violates a type invariant. The message names the field.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn breakdown(msg: impl Into<String>) -> Self {
        Error::Breakdown(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
