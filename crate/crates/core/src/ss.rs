//! State-space realization algebra.
//!
//! A [`Realization`] is the quadruple `(A, B, C, D)` of a square `p`-port
//! continuous-time system with transfer function `H(s) = C (sI − A)⁻¹ B + D`.
//! Every transfer-function manipulation the passivation algorithms need is
//! carried out on realizations: sums and products become parallel and series
//! interconnections, inverses use the feedthrough, and the para-Hermitian
//! doubling `Z(s) = H(s) + H(−s)ᵀ` is a block-diagonal construction. None of
//! these operations attempt pole-zero cancellation, so state counts are exactly
//! predictable.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matkit::{self, ComplexMatrix, RealMatrix};

/// Feedthrough matrices with a larger condition number are not inverted.
pub const MAX_FEEDTHROUGH_CONDITION: f64 = 1e12;

/// Real state-space quadruple of a square `p`-port system.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    a: RealMatrix,
    b: RealMatrix,
    c: RealMatrix,
    d: RealMatrix,
}

impl Realization {
    pub fn new(a: RealMatrix, b: RealMatrix, c: RealMatrix, d: RealMatrix) -> Result<Self> {
        let n = a.nrows();
        let p = d.nrows();
        if a.ncols() != n {
            return Err(Error::NotSquare { rows: n, cols: a.ncols() });
        }
        if p == 0 || d.ncols() != p {
            return Err(Error::Dimension(format!("D must be square with p >= 1, got {}x{}", p, d.ncols())));
        }
        if b.shape() != (n, p) {
            return Err(Error::Dimension(format!("B is {:?}, expected ({n}, {p})", b.shape())));
        }
        if c.shape() != (p, n) {
            return Err(Error::Dimension(format!("C is {:?}, expected ({p}, {n})", c.shape())));
        }
        Ok(Self { a, b, c, d })
    }

    /// Static gain `H(s) = D` with no states.
    pub fn constant(d: RealMatrix) -> Result<Self> {
        let p = d.nrows();
        Self::new(RealMatrix::zeros(0, 0), RealMatrix::zeros(0, p), RealMatrix::zeros(p, 0), d)
    }

    /// The zero transfer function on `p` ports.
    pub fn zero(p: usize) -> Self {
        Self::constant(RealMatrix::zeros(p, p)).expect("p >= 1")
    }

    pub fn a(&self) -> &RealMatrix {
        &self.a
    }
    pub fn b(&self) -> &RealMatrix {
        &self.b
    }
    pub fn c(&self) -> &RealMatrix {
        &self.c
    }
    pub fn d(&self) -> &RealMatrix {
        &self.d
    }

    pub fn states(&self) -> usize {
        self.a.nrows()
    }

    pub fn ports(&self) -> usize {
        self.d.nrows()
    }

    pub fn into_parts(self) -> (RealMatrix, RealMatrix, RealMatrix, RealMatrix) {
        (self.a, self.b, self.c, self.d)
    }

    /// `H(s) = D + C (sI − A)⁻¹ B`.
    pub fn eval(&self, s: Complex64) -> Result<ComplexMatrix> {
        let n = self.states();
        let d = matkit::to_complex(&self.d);
        if n == 0 {
            return Ok(d);
        }
        let (a, scaling) = matkit::balance(&self.a);
        let mut m = a.map(|v| Complex64::new(-v, 0.0));
        for i in 0..n {
            m[(i, i)] += s;
        }
        let scale = m.camax();
        let lu = m.lu();
        let pivot = lu.u().diagonal().iter().fold(f64::INFINITY, |acc, v| acc.min(v.norm()));
        if pivot <= 1e-14 * scale {
            return Err(Error::Singular(format!("sI - A at s = {s}")));
        }
        let b = RealMatrix::from_fn(n, self.ports(), |i, j| self.b[(i, j)] / scaling[i]);
        let c = RealMatrix::from_fn(self.ports(), n, |i, j| self.c[(i, j)] * scaling[j]);
        let x = lu
            .solve(&matkit::to_complex(&b))
            .ok_or_else(|| Error::Singular(format!("sI - A at s = {s}")))?;
        Ok(matkit::to_complex(&c) * x + d)
    }

    /// Frequency response `H(iω)`.
    pub fn freq(&self, omega: f64) -> Result<ComplexMatrix> {
        self.eval(Complex64::new(0.0, omega))
    }

    /// `R(ω) = H(iω) + H(iω)ᴴ`.
    pub fn hermitian_part(&self, omega: f64) -> Result<ComplexMatrix> {
        let h = self.freq(omega)?;
        Ok(&h + h.adjoint())
    }

    /// Controllable companion realization of `num(s) / den(s)`, coefficients
    /// in descending powers.
    pub fn from_tf(num: &[f64], den: &[f64]) -> Result<Self> {
        let den = strip_leading_zeros(den);
        let num = strip_leading_zeros(num);
        if den.is_empty() {
            return Err(Error::InvalidPolynomial("denominator is identically zero".into()));
        }
        if den.iter().chain(num).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPolynomial("non-finite coefficient".into()));
        }
        let n = den.len() - 1;
        if num.len() > den.len() {
            return Err(Error::Improper { num: num.len() - 1, den: n });
        }
        let lead = den[0];
        let den: Vec<f64> = den.iter().map(|v| v / lead).collect();
        // numerator padded to degree n
        let mut padded = vec![0.0; den.len() - num.len()];
        padded.extend(num.iter().map(|v| v / lead));

        let d0 = padded[0];
        let mut a = RealMatrix::zeros(n, n);
        let mut b = RealMatrix::zeros(n, 1);
        let mut c = RealMatrix::zeros(1, n);
        for j in 0..n {
            a[(0, j)] = -den[j + 1];
            c[(0, j)] = padded[j + 1] - d0 * den[j + 1];
        }
        for i in 1..n {
            a[(i, i - 1)] = 1.0;
        }
        if n > 0 {
            b[(0, 0)] = 1.0;
        }
        Self::new(a, b, c, RealMatrix::from_element(1, 1, d0))
    }

    /// Block assembly of a square grid of scalar rational entries; each entry
    /// gets its own companion realization, so no poles are shared across
    /// entries.
    pub fn from_rational_matrix(entries: &[Vec<RationalEntry>]) -> Result<Self> {
        let p = entries.len();
        if p == 0 || entries.iter().any(|row| row.len() != p) {
            return Err(Error::Dimension("rational matrix must be square and non-empty".into()));
        }
        let parts = entries
            .iter()
            .map(|row| row.iter().map(|e| Self::from_tf(&e.num, &e.den)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let n: usize = parts.iter().flatten().map(|r| r.states()).sum();
        let mut a = RealMatrix::zeros(n, n);
        let mut b = RealMatrix::zeros(n, p);
        let mut c = RealMatrix::zeros(p, n);
        let mut d = RealMatrix::zeros(p, p);
        let mut off = 0;
        for (i, row) in parts.iter().enumerate() {
            for (j, r) in row.iter().enumerate() {
                let k = r.states();
                a.view_mut((off, off), (k, k)).copy_from(&r.a);
                b.view_mut((off, j), (k, 1)).copy_from(&r.b);
                c.view_mut((i, off), (1, k)).copy_from(&r.c);
                d[(i, j)] = r.d[(0, 0)];
                off += k;
            }
        }
        Self::new(a, b, c, d)
    }

    fn check_ports(&self, other: &Self) -> Result<()> {
        if self.ports() != other.ports() {
            return Err(Error::Dimension(format!(
                "port mismatch: {} vs {}",
                self.ports(),
                other.ports()
            )));
        }
        Ok(())
    }

    /// Parallel interconnection `H₁(s) + H₂(s)`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ports(other)?;
        let (n1, n2) = (self.states(), other.states());
        let n = n1 + n2;
        let p = self.ports();
        let mut a = RealMatrix::zeros(n, n);
        a.view_mut((0, 0), (n1, n1)).copy_from(&self.a);
        a.view_mut((n1, n1), (n2, n2)).copy_from(&other.a);
        let mut b = RealMatrix::zeros(n, p);
        b.view_mut((0, 0), (n1, p)).copy_from(&self.b);
        b.view_mut((n1, 0), (n2, p)).copy_from(&other.b);
        let mut c = RealMatrix::zeros(p, n);
        c.view_mut((0, 0), (p, n1)).copy_from(&self.c);
        c.view_mut((0, n1), (p, n2)).copy_from(&other.c);
        Self::new(a, b, c, &self.d + &other.d)
    }

    /// `c · H(s)`.
    pub fn scale(&self, factor: f64) -> Self {
        Self { a: self.a.clone(), b: self.b.clone(), c: &self.c * factor, d: &self.d * factor }
    }

    pub fn negate(&self) -> Self {
        self.scale(-1.0)
    }

    /// `H(s) + K` for a constant `p×p` matrix `K`.
    pub fn add_const(&self, k: &RealMatrix) -> Result<Self> {
        if k.shape() != self.d.shape() {
            return Err(Error::Dimension(format!("constant is {:?}, expected {:?}", k.shape(), self.d.shape())));
        }
        Ok(Self { d: &self.d + k, ..self.clone() })
    }

    /// `H(s) + c·I`.
    pub fn add_identity(&self, factor: f64) -> Self {
        let p = self.ports();
        Self { d: &self.d + RealMatrix::identity(p, p) * factor, ..self.clone() }
    }

    /// Series interconnection `H₁(s) · H₂(s)` (input enters `H₂`).
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_ports(other)?;
        let (n1, n2) = (self.states(), other.states());
        let n = n1 + n2;
        let p = self.ports();
        let mut a = RealMatrix::zeros(n, n);
        a.view_mut((0, 0), (n1, n1)).copy_from(&self.a);
        a.view_mut((0, n1), (n1, n2)).copy_from(&(&self.b * &other.c));
        a.view_mut((n1, n1), (n2, n2)).copy_from(&other.a);
        let mut b = RealMatrix::zeros(n, p);
        b.view_mut((0, 0), (n1, p)).copy_from(&(&self.b * &other.d));
        b.view_mut((n1, 0), (n2, p)).copy_from(&other.b);
        let mut c = RealMatrix::zeros(p, n);
        c.view_mut((0, 0), (p, n1)).copy_from(&self.c);
        c.view_mut((0, n1), (p, n2)).copy_from(&(&self.d * &other.c));
        Self::new(a, b, c, &self.d * &other.d)
    }

    /// `H(s)⁻¹` with the same state dimension; needs a well-conditioned `D`.
    pub fn inverse(&self) -> Result<Self> {
        let cond = matkit::condition_number(&self.d);
        if !(cond <= MAX_FEEDTHROUGH_CONDITION) {
            return Err(Error::IllConditioned(cond));
        }
        let dinv = self
            .d
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("feedthrough D".into()))?;
        let bd = &self.b * &dinv;
        Self::new(&self.a - &bd * &self.c, bd, -(&dinv * &self.c), dinv)
    }

    /// State-coordinate change `x = T x̃`.
    pub fn similarity(&self, t: &RealMatrix) -> Result<Self> {
        let tinv = t
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("similarity transform".into()))?;
        Self::new(&tinv * &self.a * t, &tinv * &self.b, &self.c * t, self.d.clone())
    }

    /// Equivalent realization with a diagonally balanced state matrix.
    pub fn balanced(&self) -> Self {
        let (a, d) = matkit::balance(&self.a);
        let mut b = self.b.clone();
        let mut c = self.c.clone();
        for (i, &f) in d.iter().enumerate() {
            b.row_mut(i).unscale_mut(f);
            c.column_mut(i).scale_mut(f);
        }
        Self { a, b, c, d: self.d.clone() }
    }

    /// True iff every eigenvalue of `A` has real part below `−tol`.
    pub fn is_hurwitz(&self, tol: f64) -> Result<bool> {
        Ok(matkit::eigenvalues(&self.a)?.iter().all(|l| l.re < -tol))
    }

    /// Poles counted with multiplicity (eigenvalues of `A`).
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        matkit::eigenvalues(&self.a)
    }

    /// Fails with the offending eigenvalue unless `A` is Hurwitz.
    pub fn require_hurwitz(&self, tol: f64) -> Result<()> {
        match self.poles()?.into_iter().find(|l| l.re >= -tol) {
            Some(l) => Err(Error::NotHurwitz(l)),
            None => Ok(()),
        }
    }

    /// Realization of `Re{η (H(s) − ξI)⁻¹}` where the real part is taken
    /// coefficient-wise: the result equals
    /// `½[η (H(s) − ξI)⁻¹ + η̄ (H(s) − ξ̄I)⁻¹]` and has `2n` states.
    ///
    /// The complex system `Ã = A − B D_ξ⁻¹ C`, `B̃ = η B D_ξ⁻¹`,
    /// `C̃ = −D_ξ⁻¹ C`, `D̃ = η D_ξ⁻¹` with `D_ξ = D − ξI` is split into real and
    /// imaginary state components; only the real output is kept. For `η = 0`
    /// the zero system (no states) is returned.
    pub fn real_part_shifted_inverse(&self, xi: Complex64, eta: Complex64) -> Result<Self> {
        let (n, p) = (self.states(), self.ports());
        if eta == Complex64::new(0.0, 0.0) {
            return Ok(Self::zero(p));
        }
        let mut dxi = matkit::to_complex(&self.d);
        for i in 0..p {
            dxi[(i, i)] -= xi;
        }
        let cond = matkit::condition_number(&dxi);
        if !(cond <= MAX_FEEDTHROUGH_CONDITION) {
            return Err(Error::IllConditioned(cond));
        }
        let dinv = dxi
            .try_inverse()
            .ok_or_else(|| Error::Singular(format!("D - xi I with xi = {xi}")))?;
        let bc = matkit::to_complex(&self.b);
        let cc = matkit::to_complex(&self.c);
        let at: ComplexMatrix = matkit::to_complex(&self.a) - &bc * &dinv * &cc;
        let bt: ComplexMatrix = &bc * &dinv * eta;
        let ct: ComplexMatrix = -(&dinv * &cc);
        let dt: ComplexMatrix = &dinv * eta;

        let re = |m: &ComplexMatrix| m.map(|v| v.re);
        let im = |m: &ComplexMatrix| m.map(|v| v.im);
        let (a1, a2) = (re(&at), im(&at));
        let mut a = RealMatrix::zeros(2 * n, 2 * n);
        a.view_mut((0, 0), (n, n)).copy_from(&a1);
        a.view_mut((0, n), (n, n)).copy_from(&(-&a2));
        a.view_mut((n, 0), (n, n)).copy_from(&a2);
        a.view_mut((n, n), (n, n)).copy_from(&a1);
        let mut b = RealMatrix::zeros(2 * n, p);
        b.view_mut((0, 0), (n, p)).copy_from(&re(&bt));
        b.view_mut((n, 0), (n, p)).copy_from(&im(&bt));
        let mut c = RealMatrix::zeros(p, 2 * n);
        c.view_mut((0, 0), (p, n)).copy_from(&re(&ct));
        c.view_mut((0, n), (p, n)).copy_from(&(-im(&ct)));
        Self::new(a, b, c, re(&dt))
    }

    /// `H(−s)ᵀ`, realized as `(−Aᵀ, Cᵀ, −Bᵀ, Dᵀ)`.
    pub fn para_adjoint(&self) -> Self {
        Self {
            a: -self.a.transpose(),
            b: self.c.transpose(),
            c: -self.b.transpose(),
            d: self.d.transpose(),
        }
    }

    /// `Z(s) = H(s) + H(−s)ᵀ`.
    pub fn para_hermitian(&self) -> ParaHermitianRealization {
        ParaHermitianRealization::from_source(self)
    }
}

/// One scalar entry `num(s)/den(s)` of a rational transfer matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalEntry {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

impl RationalEntry {
    pub fn new(num: impl Into<Vec<f64>>, den: impl Into<Vec<f64>>) -> Self {
        Self { num: num.into(), den: den.into() }
    }
}

fn strip_leading_zeros(p: &[f64]) -> &[f64] {
    let first = p.iter().position(|&v| v != 0.0).unwrap_or(p.len());
    &p[first..]
}

/// Multiplies polynomials given in descending powers.
pub fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Expands `∏ (s − rᵢ)` for real roots.
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    roots.iter().fold(vec![1.0], |acc, r| poly_mul(&acc, &[1.0, -r]))
}

/// A realization known to satisfy `Z(s) = Z(−s)ᵀ`.
///
/// Carries the feedthrough of the source system so the skew-symmetric part
/// lost in `H(s) + H(−s)ᵀ` can be restored after projection.
#[derive(Debug, Clone)]
pub struct ParaHermitianRealization {
    system: Realization,
    source_d: RealMatrix,
}

impl ParaHermitianRealization {
    /// `A_Z = diag(A, −Aᵀ)`, `B_Z = [B; Cᵀ]`, `C_Z = [C, −Bᵀ]`, `D_Z = D + Dᵀ`.
    pub fn from_source(h: &Realization) -> Self {
        let (n, p) = (h.states(), h.ports());
        let mut a = RealMatrix::zeros(2 * n, 2 * n);
        a.view_mut((0, 0), (n, n)).copy_from(&h.a);
        a.view_mut((n, n), (n, n)).copy_from(&(-h.a.transpose()));
        let mut b = RealMatrix::zeros(2 * n, p);
        b.view_mut((0, 0), (n, p)).copy_from(&h.b);
        b.view_mut((n, 0), (n, p)).copy_from(&h.c.transpose());
        let mut c = RealMatrix::zeros(p, 2 * n);
        c.view_mut((0, 0), (p, n)).copy_from(&h.c);
        c.view_mut((0, n), (p, n)).copy_from(&(-h.b.transpose()));
        let d = &h.d + h.d.transpose();
        Self {
            system: Realization::new(a, b, c, d).expect("dimensions follow from a valid source"),
            source_d: h.d.clone(),
        }
    }

    /// Wraps a realization the caller guarantees to be per-symmetric, such as
    /// a real-rational function of another para-Hermitian system.
    pub fn assume_per_symmetric(system: Realization, source_d: RealMatrix) -> Result<Self> {
        if source_d.shape() != system.d.shape() {
            return Err(Error::Dimension("source feedthrough does not match port count".into()));
        }
        Ok(Self { system, source_d })
    }

    pub fn system(&self) -> &Realization {
        &self.system
    }

    pub fn source_d(&self) -> &RealMatrix {
        &self.source_d
    }

    /// `½(D − Dᵀ)` of the source system.
    pub fn source_skew(&self) -> RealMatrix {
        (&self.source_d - self.source_d.transpose()) * 0.5
    }

    /// Largest entry of `Z(s) − Z(−s)ᵀ` over the given sample points.
    pub fn symmetry_defect(&self, points: &[Complex64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &s in points {
            let diff = self.system.eval(s)? - self.system.eval(-s)?.transpose();
            worst = worst.max(diff.iter().fold(0.0, |acc: f64, v| acc.max(v.norm())));
        }
        Ok(worst)
    }
}

impl AsRef<Realization> for ParaHermitianRealization {
    fn as_ref(&self) -> &Realization {
        &self.system
    }
}

/// Max entry-wise distance between two transfer matrices over a set of points.
pub fn max_entry_gap(left: &Realization, right: &Realization, points: &[Complex64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &s in points {
        let diff: DMatrix<Complex64> = left.eval(s)? - right.eval(s)?;
        worst = worst.max(diff.iter().fold(0.0, |acc: f64, v| acc.max(v.norm())));
    }
    Ok(worst)
}

/// Repeated evaluation of `H(s)` at many points.
///
/// `A` is balanced and reduced to upper Hessenberg form once, after which each
/// point costs `O(n²p)` instead of a dense factorization.
#[derive(Debug, Clone)]
pub struct FrequencyResponse {
    h: RealMatrix,
    b: RealMatrix,
    c: RealMatrix,
    d: RealMatrix,
}

impl FrequencyResponse {
    pub fn new(sys: &Realization) -> Self {
        let bal = sys.balanced();
        if bal.states() == 0 {
            return Self { h: bal.a, b: bal.b, c: bal.c, d: bal.d };
        }
        let (q, h) = bal.a.clone().hessenberg().unpack();
        Self { b: q.transpose() * &bal.b, c: &bal.c * &q, h, d: bal.d }
    }

    pub fn eval(&self, s: Complex64) -> Result<ComplexMatrix> {
        let n = self.h.nrows();
        let p = self.d.nrows();
        let d = matkit::to_complex(&self.d);
        if n == 0 {
            return Ok(d);
        }
        let mut m = ComplexMatrix::from_fn(n, n, |i, j| {
            if i > j + 1 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(-self.h[(i, j)], 0.0) + if i == j { s } else { Complex64::new(0.0, 0.0) }
            }
        });
        let scale = m.camax();
        let mut x = matkit::to_complex(&self.b);
        let singular = || Error::Singular(format!("sI - A at s = {s}"));
        for k in 0..n.saturating_sub(1) {
            if m[(k + 1, k)].norm() > m[(k, k)].norm() {
                m.swap_rows(k, k + 1);
                x.swap_rows(k, k + 1);
            }
            let pivot = m[(k, k)];
            if pivot.norm() <= 1e-14 * scale {
                return Err(singular());
            }
            let l = m[(k + 1, k)] / pivot;
            if l != Complex64::new(0.0, 0.0) {
                for j in k..n {
                    let v = m[(k, j)];
                    m[(k + 1, j)] -= l * v;
                }
                for j in 0..p {
                    let v = x[(k, j)];
                    x[(k + 1, j)] -= l * v;
                }
            }
        }
        if m[(n - 1, n - 1)].norm() <= 1e-14 * scale {
            return Err(singular());
        }
        for k in (0..n).rev() {
            for j in 0..p {
                let mut v = x[(k, j)];
                for i in (k + 1)..n {
                    v -= m[(k, i)] * x[(i, j)];
                }
                x[(k, j)] = v / m[(k, k)];
            }
        }
        Ok(matkit::to_complex(&self.c) * x + d)
    }

    pub fn freq(&self, omega: f64) -> Result<ComplexMatrix> {
        self.eval(Complex64::new(0.0, omega))
    }

    /// `R(ω) = H(iω) + H(iω)ᴴ`.
    pub fn hermitian_part(&self, omega: f64) -> Result<ComplexMatrix> {
        let h = self.freq(omega)?;
        Ok(&h + h.adjoint())
    }
}
