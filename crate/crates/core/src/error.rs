use thiserror::Error;

/// Errors raised by the algebraic core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not faithful (min eigenvalue {min_eig:.3e})")]
    NotFaithful { min_eig: f64 },

    #[error("basis is not orthonormal (Gram residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("linear solve is singular: {0}")]
    SingularSolve(String),

    #[error("multiplication table is not associative at ({i},{j},{k})")]
    NotAssociative { i: usize, j: usize, k: usize },

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("no faithful invariant state exists; only actions preserving a faithful state admit a compact-quantum-group factorization")]
    NoFaithfulInvariantState,

    #[error("polynomial degree {got} exceeds the configured bound {bound}")]
    DegreeBound { got: usize, bound: usize },

    #[error("exact square root not representable in the current scalar field")]
    ExactSqrtUnavailable,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
