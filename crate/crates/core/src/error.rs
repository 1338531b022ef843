//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: expected {expected}")]
    Syntax { pos: usize, expected: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("chart mismatch: `{0}` vs `{1}`")]
    ChartMismatch(String, String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("evaluation error: {0}")]
    Evaluation(String),
    #[error("division by an expression that normalizes to zero")]
    DivisionByZero,
    #[error("form is not closed: {0}")]
    NotClosed(String),
    #[error("no Hamiltonian vector field for `{0}`")]
    NotHamiltonian(String),
    #[error("action is not strongly Hamiltonian: {0}")]
    NotStronglyHamiltonian(String),
    #[error("no group samples supplied")]
    MissingSamples,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("form is not basic: {0}")]
    NotBasic(String),
    #[error("projection/section mismatch: {0}")]
    SectionMismatch(String),
    #[error("invalid {kind}: {msg}")]
    Invalid { kind: &'static str, msg: String },
    #[error("cannot certify: {0}")]
    Uncertifiable(String),
}

impl Error {
    pub fn invalid(kind: &'static str, msg: impl Into<String>) -> Self {
        Error::Invalid {
            kind,
            msg: msg.into(),
        }
    }
}
