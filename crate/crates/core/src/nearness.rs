//! Nearest positive-semidefinite projection of Hermitian matrices.
//!
//! For a Hermitian `M = U Λ Uᴴ` the matrix `M₊ = U max(Λ, 0) Uᴴ` is the
//! closest positive-semidefinite matrix in both the Frobenius and the spectral
//! norm. Applied pointwise to `R(ω) = H(iω) + H(iω)ᴴ` it gives the reference
//! `R₊(ω)` that passivated models are measured against.

use crate::error::{Error, Result};
use crate::matkit::{self, ComplexMatrix};
use crate::ss::Realization;

/// Relative asymmetry above which an input is rejected as non-Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-8;
/// Eigenvalues within this fraction of `‖M‖₂` of zero are clamped to zero.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PsdProjection {
    /// Symmetrized input.
    pub input: ComplexMatrix,
    pub projected: ComplexMatrix,
    pub frobenius_distance: f64,
    pub spectral_distance: f64,
    /// `‖M − Mᴴ‖₂ / ‖M‖₂` of the raw input.
    pub asymmetry: f64,
    pub eigenvalues: Vec<f64>,
}

impl PsdProjection {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// Eigenvalue-clamped projection of a Hermitian matrix onto the PSD cone.
pub fn nearest_psd(m: &ComplexMatrix) -> Result<PsdProjection> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let scale = matkit::spectral_norm(m);
    let asymmetry = if scale > 0.0 { matkit::spectral_norm(&(m - m.adjoint())) / scale } else { 0.0 };
    if asymmetry > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(asymmetry));
    }
    let input = (m + m.adjoint()).scale(0.5);
    let (mut eigenvalues, u) = matkit::hermitian_eigen(&input)?;
    let cutoff = CLAMP_TOLERANCE * scale;
    for l in eigenvalues.iter_mut() {
        if l.abs() <= cutoff {
            *l = 0.0;
        }
    }
    let clamped: Vec<f64> = eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let diag = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        clamped.len(),
        clamped.iter().map(|&l| l.into()),
    ));
    let projected = &u * diag * u.adjoint();
    let projected = (&projected + projected.adjoint()).scale(0.5);
    let negative = eigenvalues.iter().filter(|&&l| l < 0.0);
    let frobenius_distance = negative.clone().map(|l| l * l).sum::<f64>().sqrt();
    let spectral_distance = negative.fold(0.0f64, |acc, &l| acc.max(-l));
    Ok(PsdProjection { input, projected, frobenius_distance, spectral_distance, asymmetry, eigenvalues })
}

/// `R₊(ω)`: nearest PSD matrix to `H(iω) + H(iω)ᴴ`.
pub fn r_plus(h: &Realization, omega: f64) -> Result<PsdProjection> {
    nearest_psd(&h.hermitian_part(omega)?)
}
