use thiserror::Error;

/// Errors raised by the linear-algebra, symplectic and capacity layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric: max asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    NonSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not positive definite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("phase-space matrices must have even dimension, found {0}")]
    OddDimension(usize),

    #[error("eigenvalues of the skew product do not pair: {a:e} vs {b:e}")]
    PairingFailure { a: f64, b: f64 },

    #[error("could not build a symplectic basis inside a degenerate eigenvalue cluster")]
    DegeneracyFailure,

    #[error("matrix is not symplectic: residual {residual:e} exceeds {tolerance:e}")]
    NotSymplectic { residual: f64, tolerance: f64 },

    #[error("plane vectors are (nearly) collinear")]
    DegeneratePlane,

    #[error("ellipsoid capacity {capacity:e} is below pi*hbar = {minimum:e}; no quantum blob fits")]
    TooSmall { capacity: f64, minimum: f64 },

    #[error("containment certificate failed: margin {margin:e}")]
    ContainmentFailure { margin: f64 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
