use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("leading coefficient of divisor is zero (|c| = {0:e})")]
    ZeroLeadingCoefficient(f64),
    #[error("series has a pole at the origin")]
    PoleAtOrigin,
    #[error("all post-constant coefficients vanish")]
    DegenerateConstant,
    #[error("series constant term is {0}, expected 1")]
    NotNormalized(String),
    #[error("coefficient sign violates the class constraint: {0}")]
    SignViolation(String),
    #[error("rejection sampler exhausted its budget of {0} draws")]
    RejectionBudgetExhausted(usize),
    #[error("parameter outside its domain: {0}")]
    Domain(String),
    #[error("degenerate target: {0}")]
    Degenerate(String),
    #[error("subordinand value at the origin is {got}, target requires {expected}")]
    CenterMismatch { got: String, expected: f64 },
    #[error("evaluation hit a pole of psi at r = {0}")]
    PoleHit(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid member descriptor: {0}")]
    InvalidMember(String),
    #[error("{0} is not a theorem-level premise")]
    NotTheoremPremise(String),
    #[error("unknown result id {0:?}")]
    UnknownResult(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
