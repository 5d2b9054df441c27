use std::fmt;

use thiserror::Error;

/// A single failed instance invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl Violation {
    pub fn new(field: &'static str, message: impl Into<String>) -> Self {
        Violation {
            field,
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed field `{field}`: {reason}")]
    Parse { field: String, reason: String },

    #[error("invalid instance: {}", join(.0))]
    Invalid(Vec<Violation>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("k = 0 has no dual pair; use the closed form")]
    TrivialCase,

    #[error("wrong budget model: expected {expected}")]
    WrongBudgetModel { expected: &'static str },

    #[error("{what} is capped at n <= {cap} (got n = {n})")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("premise violated: {0}")]
    PremiseViolated(String),

    #[error("lp format error on line {line}: {reason}")]
    LpFormat { line: usize, reason: String },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.message.as_str())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
