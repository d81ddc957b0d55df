use thiserror::Error;

/// Errors raised by the builders and checks in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("commutator of generators {i} and {j} leaves the span (residual {residual:.3e})")]
    Closure { i: usize, j: usize, residual: f64 },
    #[error("generator set is linearly dependent: {0}")]
    Dependence(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("degenerate configuration: {0}")]
    Degeneracy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
