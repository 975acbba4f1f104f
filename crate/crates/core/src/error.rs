use thiserror::Error;

/// Errors raised by the carpet library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("letter {letter} is not a valid map index (system has {len} maps)")]
    IndexError { letter: usize, len: usize },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("operation requires a {expected} system, got {found}")]
    WrongClass { expected: &'static str, found: String },
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("optimizer failed to converge after {restarts} restarts (best value {best})")]
    OptimizerFailure { restarts: usize, best: f64 },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("value out of range: {0}")]
    RangeError(String),
    #[error("invalid packing: {0}")]
    InvalidPacking(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
