use thiserror::Error;

/// Errors raised by the numerical and modelling layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BqpError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix must have dimension at least 1")]
    EmptyMatrix,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("matrix is not positive definite (pivot {pivot} failed)")]
    NotPositiveDefinite { pivot: usize },

    #[error("eigenvalue iteration did not converge within {iterations} steps")]
    NoConvergence { iterations: usize },

    #[error("multipliers are outside the dual feasible cone")]
    Infeasible,

    #[error("entry {index} is {value}, expected -1 or +1")]
    NotSign { index: usize, value: f64 },

    #[error("entries {indices:?} are not within tolerance of -1 or +1")]
    NotBoolean { indices: Vec<usize> },

    #[error("instance dimension {n} exceeds the enumeration cap {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no feasible starting multipliers found after {doublings} doublings")]
    NoFeasibleStart { doublings: u32 },

    #[error("could not produce a positive definite certificate")]
    GenerationFailed,
}

pub type Result<T> = std::result::Result<T, BqpError>;
