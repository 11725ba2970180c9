use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("expected {expected} samples, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid samples: {0}")]
    InvalidSamples(String),
    #[error("every grid point is masked out")]
    AllMasked,
    #[error("grid half-width {found} is below the required {required}")]
    GridTooNarrow { required: f64, found: f64 },
    #[error("wavefunction has not decayed at the grid ends (|Ψ| ratio {ratio:e})")]
    InsufficientDecay { ratio: f64 },
    #[error("Wigner quadrature left an imaginary part of {imag:e}")]
    ComplexWigner { imag: f64 },
    #[error(
        "|B| = {b:e} is too small for the quadratic generating function; a symplectic matrix with \
         B = 0 must be written as a product of two symplectic matrices with invertible B blocks, \
         which is not implemented"
    )]
    SingularB { b: f64 },
    #[error("AD − BC = {det}, not 1")]
    NotSymplectic { det: f64 },
    #[error("Maslov index {m} is not admissible here (expected {expected} or {alternate})")]
    InvalidMaslov { m: u8, expected: u8, alternate: u8 },
    #[error("S does not bring M to normal form (residual {residual:e})")]
    NotWilliamsonFactor { residual: f64 },
    #[error("the Fermi function has constant sign on the sampled region")]
    NoContour,
    #[error("Ψ vanishes at x = {x}; supply R and Φ separately")]
    HasNodes { x: f64 },
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("CSV parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] fermiblob::Error),
}

pub type Result<T> = std::result::Result<T, GridError>;
