use lst_core::LstError;
use serde_json::{json, Value};

/// Failure of a run. The exit code separates bad input (2) from problems
/// that are well posed but have no answer (1).
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Infeasible { message: String, detail: Value },
    GoldenMismatch(Vec<String>),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    pub fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Infeasible { .. } | CliError::GoldenMismatch(_) => 1,
        }
    }

    /// One-line JSON for stderr.
    pub fn report(&self) -> Value {
        match self {
            CliError::Invalid(m) => json!({ "error": "invalid", "message": m }),
            CliError::Infeasible { message, detail } => json!({ "error": "infeasible", "message": message, "detail": detail }),
            CliError::GoldenMismatch(names) => json!({ "error": "golden-mismatch", "tables": names }),
        }
    }
}

impl From<LstError> for CliError {
    fn from(e: LstError) -> Self {
        match e {
            LstError::Infeasible(m) => CliError::Infeasible { message: m, detail: Value::Null },
            LstError::Domain(m) | LstError::Input(m) => CliError::Invalid(m),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
