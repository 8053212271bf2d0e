use thiserror::Error;

pub type Result<T, E = GhdError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GhdError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// The sketch error guarantee needs `s >= (L + 10/n)^3 / U^2`.
    #[error("hypothesis violated: s = {s} but at least {required} is needed")]
    HypothesisViolated { s: f64, required: f64 },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("bit budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("n = {n} exceeds the exhaustive construction limit of {max}")]
    SizeLimit { n: usize, max: usize },

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> GhdError {
    GhdError::InvalidInput(msg.into())
}
