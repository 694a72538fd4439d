//! Reference models used throughout the tests, the guide and the CLI fixtures.

use crate::matkit::RealMatrix;
use crate::ss::{poly_from_roots, RationalEntry, Realization};

/// `H(s) = −1 + 2/(s+1)`: non-passive with `δ₋ = −2`, `δ₊ = 2`.
pub fn toy() -> Realization {
    Realization::from_tf(&[-1.0, 1.0], &[1.0, 1.0]).expect("valid")
}

/// `H(s) = 1/(s+1)`: passive, `δ₋ = 0` approached as `ω → ∞`.
pub fn lowpass() -> Realization {
    Realization::from_tf(&[1.0], &[1.0, 1.0]).expect("valid")
}

/// Fifth-order SISO non-passive model.
pub fn ttp() -> Realization {
    Realization::from_tf(&TTP_NUM, &TTP_DEN).expect("valid")
}

pub const TTP_NUM: [f64; 6] = [1.0, 7.2, 47.01, 230.8, 536.6, 587.1];
pub const TTP_DEN: [f64; 6] = [1.0, 3.2, 32.61, 43.63, 117.5, 104.3];

/// Fifth-order SISO minimum-phase non-passive model given by its zeros
/// `−1, −3, −90, −95, −100` and poles `−25, −35, −38, −180, −185`.
pub fn dumi1() -> Realization {
    let (num, den) = dumi1_polynomials();
    Realization::from_tf(&num, &den).expect("valid")
}

pub fn dumi1_polynomials() -> (Vec<f64>, Vec<f64>) {
    (
        poly_from_roots(&[-1.0, -3.0, -90.0, -95.0, -100.0]),
        poly_from_roots(&[-25.0, -35.0, -38.0, -180.0, -185.0]),
    )
}

/// Symmetric 2-port non-passive model with six states.
pub fn trafe1() -> Realization {
    Realization::from_rational_matrix(&trafe1_entries()).expect("valid")
}

pub fn trafe1_entries() -> Vec<Vec<RationalEntry>> {
    let off = RationalEntry::new(vec![-2.0, -10.0], vec![1.0, 6.0]);
    vec![
        vec![RationalEntry::new(vec![2.0, 6.0, 16.0], vec![1.0, 3.0, 2.0]), off.clone()],
        vec![off, RationalEntry::new(vec![2.0, 5.0, 1.0], vec![1.0, 3.0, 2.0])],
    ]
}

/// `H(s) = D + C(sI − A)⁻¹B` for a diagonal stable `A`; handy for building
/// systems with prescribed poles.
pub fn diagonal(poles: &[f64], b: &[f64], c: &[f64], d: f64) -> Realization {
    let n = poles.len();
    Realization::new(
        RealMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(poles)),
        RealMatrix::from_column_slice(n, 1, b),
        RealMatrix::from_row_slice(1, n, c),
        RealMatrix::from_element(1, 1, d),
    )
    .expect("valid")
}
