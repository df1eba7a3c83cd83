use thiserror::Error;

/// Errors raised by the engine.
///
/// `Domain` covers invalid inputs, `Infeasible` covers well-formed problems
/// without a solution, and `Input` covers file and parsing failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LstError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, LstError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(LstError::Domain(msg.into()))
}
