use thiserror::Error;

/// Errors produced by the exact-arithmetic and construction routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Hecke index must satisfy p >= 3, got {0}")]
    InvalidIndex(i64),

    #[error("operands live in different fields (p = {0} and p = {1})")]
    FieldMismatch(u32, u32),

    #[error("operands use different radicands ({0} and {1})")]
    RadicandMismatch(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("radicand {0} is not positive under the canonical embedding")]
    NonPositiveRadicand(String),

    #[error("entry {0} is not in Z[lambda]")]
    NotIntegral(String),

    #[error("matrix has determinant {0}, expected 1")]
    BadDeterminant(String),

    #[error("form {0} has zero leading coefficient")]
    DegenerateForm(String),

    #[error("point {0} is not hyperbolic: {1}")]
    NotHyperbolic(String, String),

    #[error("search budget exhausted (cf_steps = {0}, or coordinates outgrew height_bits)")]
    BudgetExceeded(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
