use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not orthogonal: ||Q^T Q - I||_inf = {defect:.3e}")]
    NotOrthogonal { defect: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite coefficient at flat index {0}")]
    NonFinite(usize),

    #[error("operator is not idempotent: ||A^2 - A||_inf = {defect:.3e}")]
    NotIdempotent { defect: f64 },

    #[error("unknown {kind} '{name}'")]
    UnknownName { kind: &'static str, name: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature not converged: integral {value} is {residual:.3e} away from an integer")]
    QuadratureNotConverged { value: f64, residual: f64 },

    #[error("unsupported quadrature degree {degree} (max {max})")]
    UnsupportedDegree { degree: usize, max: usize },

    #[error("group closure fails: {a} * {b} is not an element")]
    NotClosed { a: String, b: String },

    #[error("tensor is not in space '{space}': residual {residual:.3e}")]
    NotInSpace { space: String, residual: f64 },

    #[error("internal consistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
