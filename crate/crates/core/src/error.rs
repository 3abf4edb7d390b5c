use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("basis dimension {dim} exceeds capacity {cap}")]
    Capacity { dim: u128, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("level index {index} outside 1..={omega}")]
    LevelIndex { index: usize, omega: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("value {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("ground vector has negative amplitude {value:e} at index {index} after gauge fixing")]
    Gauge { index: usize, value: f64 },

    #[error("single-particle level {level} sits on the Fermi level (|e - mu| = {gap:e})")]
    DegenerateFermiLevel { level: usize, gap: f64 },

    #[error("root bracket failure: {0}")]
    Bracket(String),

    #[error("occupation of mode {mode} is at an endpoint ({value}); the matched gaussian is singular")]
    DegenerateGaussian { mode: usize, value: f64 },
}
