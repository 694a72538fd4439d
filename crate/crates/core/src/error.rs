use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the passivation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("eigenvalue iteration failed to converge for a {0}x{0} matrix")]
    NoConvergence(usize),

    #[error("selection predicate splits the complex-conjugate pair {0}")]
    SelectSplitsPair(Complex64),

    #[error("Schur block swap at position {position} is numerically unstable (residual {residual:e})")]
    ReorderFailed { position: usize, residual: f64 },

    #[error("Sylvester equation is ill-posed: spectra overlap (separation {separation:e})")]
    SpectraOverlap { separation: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("ill-conditioned feedthrough (condition number {0:e})")]
    IllConditioned(f64),

    #[error("improper transfer function: numerator degree {num} exceeds denominator degree {den}")]
    Improper { num: usize, den: usize },

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("state matrix is not Hurwitz stable (eigenvalue {0})")]
    NotHurwitz(Complex64),

    #[error("eigenvalue {0} lies within the imaginary-axis tolerance band")]
    ImaginaryAxisPole(Complex64),

    #[error("matrix is not Hermitian (relative asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not skew-symmetric (deviation {0:e})")]
    NotSkew(f64),

    #[error("argument {value} outside the valid domain {domain}")]
    Domain { value: f64, domain: String },

    #[error("model is not passifiable: {0}")]
    NotPassifiable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
