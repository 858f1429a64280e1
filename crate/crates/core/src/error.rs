use thiserror::Error;

use crate::spectral::MAX_DIM;

/// Errors raised by the engine. Validation of ribbon graphs is reported as
/// a list of violations instead (see [`crate::graph::Violation`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid manifold: dimension {0} is outside 2..={MAX_DIM}")]
    InvalidManifold(usize),

    #[error("eigenvalue {value} is not |k|^2 for any k in Z^{dim}")]
    UnrealizedEigenvalue { value: u32, dim: usize },

    #[error("negative length {value} for edge variable t{var}")]
    NegativeLength { var: u32, value: f64 },

    #[error("cannot contract edge {edge}: {reason}")]
    Contraction { edge: usize, reason: String },

    #[error("composition error: {0}")]
    Composition(String),

    #[error("cannot label graph: {0}")]
    Labeling(String),

    #[error("input {slot} has a component with eigenvalue {eigenvalue} outside the cutoff {cutoff}")]
    Projection {
        slot: usize,
        eigenvalue: u32,
        cutoff: String,
    },

    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(String, String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("unknown target `{0}`")]
    UnknownTarget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
