use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(String, String),

    #[error("invalid algebra descriptor: {0}")]
    InvalidAlgebra(String),

    #[error("coefficient vector has length {got}, algebra dimension is {expected}")]
    CoefficientLength { expected: usize, got: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("retry cap of {0} exceeded")]
    RetryCap(usize),

    #[error("linear program has no objective")]
    MissingObjective,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("vertex cap exceeded: {count} vertices, cap is {cap}")]
    CapExceeded { count: usize, cap: usize },

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("not a state: {0}")]
    NotAState(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not spectral and strongly symmetric: {0}")]
    NotSss(String),

    #[error("unknown table label: {0}")]
    UnknownLabel(String),

    #[error("formula error: {0}")]
    Formula(String),

    #[error("parse error: {0}")]
    Parse(String),
}
