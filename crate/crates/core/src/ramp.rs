//! Rational over-approximations of the ramp `max(x, 0)`.
//!
//! Two families are provided:
//!
//! * `ζₙ(x) = x(1+x)ⁿ/((1+x)ⁿ − 1)` on `[−1, ∞)` with gap at most `1/n`, its
//!   scaled form `φₙ(x) = ν ζₙ(x/ν)` and the partial-fraction expansion of
//!   `ζ₂ₘ`;
//! * a minimax construction built from a rational Chebyshev approximation
//!   `ρ(t) ≈ √t` on `[0, 1]`, transported to an arbitrary interval `[−a, b]` by
//!   a bilinear change of variable.
//!
//! Every approximant is stored as a [`RampApproximant`] in partial-fraction
//! form, which is what the state-space assembly consumes.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this magnitude `ζₙ` switches to its two-term series at zero.
const SERIES_SWITCH: f64 = 1e-9;

/// `ζₙ(x) = x(1+x)ⁿ/((1+x)ⁿ − 1)` for `x ≥ −1`, with `ζₙ(0) = 1/n`.
pub fn zeta(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("zeta order must be at least 1".into()));
    }
    if !(x >= -1.0) {
        return Err(Error::Domain { value: x, domain: "[-1, inf)".into() });
    }
    let nf = f64::from(n);
    if x.abs() < SERIES_SWITCH {
        return Ok(1.0 / nf + (nf + 1.0) / (2.0 * nf) * x);
    }
    let log = nf * x.ln_1p();
    let e = log.exp_m1();
    if x > 0.0 {
        Ok(x + x / e)
    } else {
        Ok(x * (log.exp() / e))
    }
}

/// `φₙ(x) = ν ζₙ(x/ν)` for `x ≥ −ν`.
pub fn phi(n: u32, nu: f64, x: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::Domain { value: nu, domain: "(0, inf)".into() });
    }
    if !(x >= -nu) {
        return Err(Error::Domain { value: x, domain: format!("[{}, inf)", -nu) });
    }
    Ok(nu * zeta(n, x / nu)?)
}

/// `φ₂ₙ(x) = φₙ(x)² / (2φₙ(x) − x)`.
pub fn phi_double(prev: f64, x: f64) -> Result<f64> {
    let den = 2.0 * prev - x;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Domain { value: x, domain: "2 phi(x) != x".into() });
    }
    Ok(prev * prev / den)
}

/// A complex-conjugate pair of simple poles, contributing `Re{η/(x − ξ)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexTerm {
    pub pole: Complex64,
    pub residue: Complex64,
}

/// A real simple pole contributing `r/(x − p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealTerm {
    pub pole: f64,
    pub residue: f64,
}

/// `f(x) = slope·x + offset + Σ rⱼ/(x − pⱼ) + Σ Re{ηₖ/(x − ξₖ)}` with the
/// guarantee `0 ≤ f(x) − max(x, 0) ≤ gap_bound` on `interval`.
#[derive(Debug, Clone, PartialEq)]
pub struct RampApproximant {
    pub linear_slope: f64,
    pub linear_offset: f64,
    pub complex_terms: Vec<ComplexTerm>,
    pub real_terms: Vec<RealTerm>,
    pub gap_bound: f64,
    /// `(lo, hi)`; `hi` may be `+∞`.
    pub interval: (f64, f64),
}

impl RampApproximant {
    /// `f(x) = x + ν` on `[−ν, ∞)`.
    pub fn shift(nu: f64) -> Self {
        Self {
            linear_slope: 1.0,
            linear_offset: nu,
            complex_terms: Vec::new(),
            real_terms: Vec::new(),
            gap_bound: nu,
            interval: (-nu, f64::INFINITY),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut v = self.linear_slope * x + self.linear_offset;
        for t in &self.real_terms {
            v += t.residue / (x - t.pole);
        }
        for t in &self.complex_terms {
            v += (t.residue / (Complex64::from(x) - t.pole)).re;
        }
        v
    }

    /// `f(x) − max(x, 0)`; fails outside the validity interval.
    pub fn gap(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.interval;
        let slack = 1e-12 * (1.0 + lo.abs().max(if hi.is_finite() { hi.abs() } else { 0.0 }));
        if !(x >= lo - slack && x <= hi + slack) {
            return Err(Error::Domain { value: x, domain: format!("[{lo}, {hi}]") });
        }
        Ok(self.eval(x) - x.max(0.0))
    }

    /// `ν f(x/ν)`: poles scale by `ν`, residues by `ν²`.
    pub fn scaled(&self, nu: f64) -> Self {
        Self {
            linear_slope: self.linear_slope,
            linear_offset: nu * self.linear_offset,
            complex_terms: self
                .complex_terms
                .iter()
                .map(|t| ComplexTerm { pole: t.pole * nu, residue: t.residue * nu * nu })
                .collect(),
            real_terms: self
                .real_terms
                .iter()
                .map(|t| RealTerm { pole: t.pole * nu, residue: t.residue * nu * nu })
                .collect(),
            gap_bound: nu * self.gap_bound,
            interval: (nu * self.interval.0, nu * self.interval.1),
        }
    }

    /// Degree of the denominator, counting each complex term twice.
    pub fn denominator_degree(&self) -> usize {
        self.real_terms.len() + 2 * self.complex_terms.len()
    }
}

/// Partial fractions of `ζ₂ₘ` on `[−1, ∞)`:
/// `x + (1/m)/(x+2) + Σₖ Re{ηₖ/(x − ξₖ)}` for `k = 1..m−1` with
/// `ξₖ = −1 + wₖ`, `ηₖ = (wₖ² − wₖ)/m` and `wₖ = e^{iπk/m}`.
pub fn zeta_partial_fractions(m: u32) -> Result<RampApproximant> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let mf = f64::from(m);
    let complex_terms = (1..m)
        .map(|k| {
            let w = Complex64::from_polar(1.0, PI * f64::from(k) / mf);
            ComplexTerm { pole: w - 1.0, residue: (w * w - w) / mf }
        })
        .collect();
    Ok(RampApproximant {
        linear_slope: 1.0,
        linear_offset: 0.0,
        complex_terms,
        real_terms: vec![RealTerm { pole: -2.0, residue: 1.0 / mf }],
        gap_bound: 1.0 / (2.0 * mf),
        interval: (-1.0, f64::INFINITY),
    })
}

/// Coefficients of `ρ(t) = a₀ − Σₖ aₖ/(t + bₖ)`, a rational minimax
/// approximation of `√t` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimaxTable {
    pub n: usize,
    /// `a₀..aₙ`.
    pub a: Vec<f64>,
    /// `b₁..bₙ`.
    pub b: Vec<f64>,
    /// Nominal equioscillation level.
    pub e_n: f64,
}

/// Error extremes of a table, measured on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    /// `max_t (ρ(t) − √t)`.
    pub max_error: f64,
    /// `min_t (ρ(t) − √t)`.
    pub min_error: f64,
}

impl Certificate {
    /// Constant used in `f(x) = ½(ρ(x²) + x + E)`; the smallest value keeping
    /// `f(x) ≥ max(x, 0)`.
    pub fn offset(&self) -> f64 {
        -self.min_error
    }

    /// Resulting bound `f(x) − max(x, 0) ≤ α` on `[−1, 1]`.
    pub fn alpha(&self) -> f64 {
        0.5 * (self.max_error - self.min_error)
    }

    /// `max_t |ρ(t) − √t|`.
    pub fn level(&self) -> f64 {
        self.max_error.max(-self.min_error)
    }
}

impl MinimaxTable {
    /// The built-in `n = 4` table.
    pub fn order4() -> Self {
        Self {
            n: 4,
            a: vec![2.6397296257, 1.4034219887e-6, 0.0003730797, 0.0290141901, 5.6266532592],
            b: vec![0.0000917473, 0.0049831021, 0.1014048457, 2.4866930733],
            e_n: 0.0007365636,
        }
    }

    pub fn new(a: Vec<f64>, b: Vec<f64>, e_n: f64) -> Result<Self> {
        let n = b.len();
        if a.len() != n + 1 {
            return Err(Error::Dimension(format!("expected {} numerator coefficients, got {}", n + 1, a.len())));
        }
        if a[1..].iter().chain(&b).any(|&v| !(v > 0.0)) {
            return Err(Error::InvalidArgument("minimax coefficients a_k, b_k must be positive".into()));
        }
        if b.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("b_k must be strictly increasing".into()));
        }
        Ok(Self { n, a, b, e_n })
    }

    /// Measures the extremes of `ρ(t) − √t` on `[0, 1]` by a dense scan in
    /// `s = √t` followed by golden-section refinement of every local extremum.
    pub fn certify(&self) -> Certificate {
        const POINTS: usize = 20_000;
        let err = |s: f64| minimax_rho_unchecked(s * s, self) - s;
        let values: Vec<f64> = (0..=POINTS).map(|k| err(k as f64 / POINTS as f64)).collect();
        let mut max_error = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut min_error = values.iter().copied().fold(f64::INFINITY, f64::min);
        let h = 1.0 / POINTS as f64;
        for k in 1..POINTS {
            let (l, c, r) = (values[k - 1], values[k], values[k + 1]);
            let lo = (k as f64 - 1.0) * h;
            let hi = (k as f64 + 1.0) * h;
            if c >= l && c >= r {
                max_error = max_error.max(golden_max(&err, lo, hi));
            }
            if c <= l && c <= r {
                min_error = min_error.min(-golden_max(&|s| -err(s), lo, hi));
            }
        }
        // guard the last few ulps of the refinement
        let pad = 64.0 * f64::EPSILON * (1.0 + self.a[0].abs());
        Certificate { max_error: max_error + pad, min_error: min_error - pad }
    }
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    f1.max(f2).max(f(lo)).max(f(hi))
}

fn minimax_rho_unchecked(t: f64, table: &MinimaxTable) -> f64 {
    table.a[0] - table.a[1..].iter().zip(&table.b).map(|(a, b)| a / (t + b)).sum::<f64>()
}

/// `ρ(t) = a₀ − Σ aₖ/(t + bₖ)` for `t ≥ 0`.
pub fn minimax_rho(t: f64, table: &MinimaxTable) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain { value: t, domain: "[0, inf)".into() });
    }
    Ok(minimax_rho_unchecked(t, table))
}

/// `f(x) = ½(ρ(x²) + x + E)` on `[−1, 1]` with `E` the certified offset.
pub fn minimax_f(x: f64, table: &MinimaxTable) -> Result<f64> {
    minimax_f_with(x, table, &table.certify())
}

fn minimax_f_with(x: f64, table: &MinimaxTable, cert: &Certificate) -> Result<f64> {
    if !(x.abs() <= 1.0 + 1e-12) {
        return Err(Error::Domain { value: x, domain: "[-1, 1]".into() });
    }
    Ok(0.5 * (minimax_rho_unchecked(x * x, table) + x + cert.offset()))
}

/// `τ = (b − a)/(b + a)`, `κ = 2ab/(a + b)`; `x ↦ x/(τx + κ)` maps `[−a, b]`
/// onto `[−1, 1]`.
pub fn bilinear_params(a: f64, b: f64) -> Result<(f64, f64)> {
    for v in [a, b] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain { value: v, domain: "(0, inf)".into() });
        }
    }
    Ok(((b - a) / (b + a), 2.0 * a * b / (a + b)))
}

/// Partial fractions of `(τx + κ)³ / (x² + ℓ(τx + κ)²)`: slope, offset, and
/// the pole/residue pair whose real part carries the remainder.
pub fn transformed_term(tau: f64, kappa: f64, ell: f64) -> (f64, f64, ComplexTerm) {
    let q = 1.0 + tau * tau * ell;
    let slope = tau.powi(3) / q;
    let offset = kappa * tau * tau * (3.0 + tau * tau * ell) / (q * q);
    let r = ell.sqrt();
    let pole = Complex64::from(kappa * r) / Complex64::new(-tau * r, 1.0);
    let residue = pole.powi(3) / (kappa * ell * ell);
    (slope, offset, ComplexTerm { pole, residue })
}

/// `f_{a,b}(x) = (τx + κ) f(x/(τx + κ))` on `[−a, b]`, expanded into a linear
/// part plus one complex term per table pole. The gap bound is
/// `α·max(a, b)` with `α` from [`MinimaxTable::certify`].
pub fn minimax_transformed(a: f64, b: f64, table: &MinimaxTable) -> Result<RampApproximant> {
    let (tau, kappa) = bilinear_params(a, b)?;
    let cert = table.certify();
    let lead = cert.offset() + table.a[0];
    let mut slope = 0.5 * (1.0 + lead * tau);
    let mut offset = 0.5 * lead * kappa;
    let mut complex_terms = Vec::with_capacity(table.n);
    for (&ak, &bk) in table.a[1..].iter().zip(&table.b) {
        let (s, o, term) = transformed_term(tau, kappa, bk);
        slope -= 0.5 * ak * s;
        offset -= 0.5 * ak * o;
        complex_terms.push(ComplexTerm { pole: term.pole, residue: term.residue * (-0.5 * ak) });
    }
    Ok(RampApproximant {
        linear_slope: slope,
        linear_offset: offset,
        complex_terms,
        real_terms: Vec::new(),
        gap_bound: cert.alpha() * a.max(b),
        interval: (-a, b),
    })
}

/// Direct evaluation of `(τx + κ) f(x/(τx + κ))`.
pub fn minimax_composed(x: f64, a: f64, b: f64, table: &MinimaxTable) -> Result<f64> {
    let (tau, kappa) = bilinear_params(a, b)?;
    let w = tau * x + kappa;
    Ok(w * minimax_f_with(x / w, table, &table.certify())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
    }

    #[test]
    fn zeta_one_is_shift() {
        assert_abs_diff_eq!(zeta(1, 0.5).unwrap(), 1.5, epsilon = 1e-15);
        for x in grid(-1.0, 10.0, 101) {
            assert_abs_diff_eq!(zeta(1, x).unwrap(), 1.0 + x, epsilon = 1e-12);
        }
    }

    #[test]
    fn zeta_special_values() {
        for n in [1, 2, 3, 8, 16] {
            assert_eq!(zeta(n, -1.0).unwrap(), 0.0);
            assert_eq!(zeta(n, 0.0).unwrap(), 1.0 / f64::from(n));
        }
        assert_abs_diff_eq!(zeta(2, 2.0).unwrap(), 9.0 / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn zeta_is_continuous_across_series_switch() {
        for n in [2, 5, 16] {
            let nf = f64::from(n);
            let slope = (nf + 1.0) / (2.0 * nf);
            let inside = zeta(n, 0.99e-9).unwrap();
            let outside = zeta(n, 1.01e-9).unwrap();
            assert!((outside - inside - slope * 0.02e-9).abs() < 1e-15);
        }
    }

    #[test]
    fn zeta_rejects_below_domain() {
        assert!(matches!(zeta(3, -1.5), Err(Error::Domain { .. })));
        assert!(zeta(0, 1.0).is_err());
    }

    #[test]
    fn zeta_is_monotone() {
        for n in [1, 2, 4, 8] {
            let v: Vec<f64> = grid(-1.0, 10.0, 2001).map(|x| zeta(n, x).unwrap()).collect();
            assert!(v.windows(2).all(|w| w[1] >= w[0]));
        }
    }

    #[test]
    fn phi_examples() {
        let nu = 1.7;
        for x in grid(-nu, 5.0, 50) {
            assert_abs_diff_eq!(phi(1, nu, x).unwrap(), x + nu, epsilon = 1e-12);
            let closed = (x + nu).powi(2) / (x + 2.0 * nu);
            assert_abs_diff_eq!(phi(2, nu, x).unwrap(), closed, epsilon = 1e-12);
            assert_abs_diff_eq!(phi_double(x + nu, x).unwrap(), closed, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(phi(5, 3.0, 0.0).unwrap(), 0.6);
    }

    #[test]
    fn phi_double_blowup_is_reported() {
        assert!(phi_double(1.0, 2.0).is_err());
    }

    #[test]
    fn partial_fractions_m1_and_m2() {
        let f = zeta_partial_fractions(1).unwrap();
        assert!(f.complex_terms.is_empty());
        for x in grid(-1.0, 10.0, 200) {
            assert_abs_diff_eq!(f.eval(x), x + 1.0 / (x + 2.0), epsilon = 1e-13);
        }
        let g = zeta_partial_fractions(2).unwrap();
        for x in grid(-0.999, 10.0, 200) {
            let explicit = x
                + 0.5
                    * (1.0 / (x + 2.0)
                        + (Complex64::new(-1.0, -1.0) / Complex64::new(x + 1.0, -1.0)).re);
            assert_abs_diff_eq!(g.eval(x), explicit, epsilon = 1e-13);
        }
    }

    #[test]
    fn partial_fractions_match_zeta() {
        for m in 1..=8 {
            let f = zeta_partial_fractions(m).unwrap();
            assert_eq!(f.real_terms.len(), 1);
            assert_eq!(f.complex_terms.len(), (m - 1) as usize);
            assert_eq!(f.denominator_degree(), (2 * m - 1) as usize);
            for x in grid(-0.999, 10.0, 500) {
                let z = zeta(2 * m, x).unwrap();
                assert!((f.eval(x) - z).abs() <= 1e-10 * z.abs().max(1e-3), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn scaling_matches_phi() {
        let nu = 0.37;
        let f = zeta_partial_fractions(3).unwrap().scaled(nu);
        assert_abs_diff_eq!(f.gap_bound, nu / 6.0);
        for x in grid(-nu, 4.0, 300) {
            let v = phi(6, nu, x).unwrap();
            assert!((f.eval(x) - v).abs() <= 1e-10 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn shift_gap() {
        let f = RampApproximant::shift(2.0);
        assert_eq!(f.gap(3.0).unwrap(), 2.0);
        assert_eq!(f.gap(-2.0).unwrap(), 0.0);
        assert!(f.gap(-2.5).is_err());
    }

    #[test]
    fn rho_table_endpoints() {
        let t = MinimaxTable::order4();
        let e = t.e_n;
        assert!((minimax_rho(0.0, &t).unwrap() - e).abs() < 2e-5);
        assert!((minimax_rho(1.0, &t).unwrap() - 1.0 + e).abs() < 2e-5);
        assert!(minimax_rho(-0.1, &t).is_err());
    }

    #[test]
    fn table_is_well_formed() {
        let t = MinimaxTable::order4();
        let again = MinimaxTable::new(t.a.clone(), t.b.clone(), t.e_n).unwrap();
        assert_eq!(again, t);
        assert!(MinimaxTable::new(vec![1.0, 1.0], vec![-1.0], 0.1).is_err());
        assert!(MinimaxTable::new(vec![1.0, 1.0, 1.0], vec![2.0, 1.0], 0.1).is_err());
    }

    #[test]
    fn certificate_brackets_nominal_level() {
        let c = MinimaxTable::order4().certify();
        assert!(c.level() >= 0.00072 && c.level() <= 0.00076);
        assert!((c.alpha() - 0.0007365636).abs() < 1e-8);
        // the table's 10-digit rounding spreads the extremes by a few 1e-9
        assert!(c.alpha() > 0.0007365636);
    }

    #[test]
    fn minimax_f_gap() {
        let t = MinimaxTable::order4();
        let c = t.certify();
        for x in grid(-1.0, 1.0, 1000) {
            let gap = minimax_f(x, &t).unwrap() - x.max(0.0);
            assert!(gap >= -1e-12 && gap <= c.alpha() + 1e-12, "x={x} gap={gap}");
        }
        let f0 = minimax_f(0.0, &t).unwrap();
        assert!((f0 - t.e_n).abs() < 2e-5);
    }

    #[test]
    fn bilinear_examples() {
        assert_eq!(bilinear_params(1.0, 1.0).unwrap(), (0.0, 1.0));
        let (tau, kappa) = bilinear_params(2.0, 1.0).unwrap();
        assert_abs_diff_eq!(tau, -1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(kappa, 4.0 / 3.0, epsilon = 1e-15);
        let map = |x: f64| x / (tau * x + kappa);
        assert_abs_diff_eq!(map(-2.0), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(map(1.0), 1.0, epsilon = 1e-15);
        assert!(bilinear_params(0.0, 1.0).is_err());
    }

    #[test]
    fn transformed_term_matches_definition() {
        for &(tau, kappa, ell) in &[(0.3, 1.2, 0.1), (-0.7, 0.4, 2.5), (0.0, 2.0, 0.01), (0.95, 0.1, 1e-4)] {
            let (s, o, t) = transformed_term(tau, kappa, ell);
            for x in grid(-3.0, 3.0, 101) {
                let w: f64 = tau * x + kappa;
                let direct = w.powi(3) / (x * x + ell * w * w);
                let split = s * x + o + (t.residue / (Complex64::from(x) - t.pole)).re;
                assert!((direct - split).abs() <= 1e-9 * (1.0 + direct.abs()));
            }
        }
    }

    #[test]
    fn symmetric_interval_specialization() {
        let t = MinimaxTable::order4();
        let f = minimax_transformed(2.5, 2.5, &t).unwrap();
        let kappa: f64 = 2.5;
        for (term, (&ak, &bk)) in f.complex_terms.iter().zip(t.a[1..].iter().zip(&t.b)) {
            for x in grid(-2.5, 2.5, 21) {
                let v = (term.residue / (Complex64::from(x) - term.pole)).re;
                let expected = -0.5 * ak * kappa.powi(3) / (x * x + bk * kappa * kappa);
                assert!((v - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
            }
        }
        for x in grid(-2.5, 2.5, 200) {
            let direct = kappa * minimax_f(x / kappa, &t).unwrap();
            assert!((f.eval(x) - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
        }
    }

    #[test]
    fn transformed_gap_at_endpoints() {
        let t = MinimaxTable::order4();
        let (a, b) = (3.0, 0.5);
        let f = minimax_transformed(a, b, &t).unwrap();
        for x in [-a, b] {
            let g = f.gap(x).unwrap();
            assert!(g >= -1e-12 && g <= f.gap_bound + 1e-12);
        }
        assert!(f.gap(b + 0.1).is_err());
    }

    proptest! {
        #[test]
        fn transformed_agrees_with_composition(a in 0.01f64..50.0, b in 0.01f64..50.0, s in 0.0f64..1.0) {
            let t = MinimaxTable::order4();
            let f = minimax_transformed(a, b, &t).unwrap();
            let x = -a + (a + b) * s;
            let direct = minimax_composed(x, a, b, &t).unwrap();
            prop_assert!((f.eval(x) - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
            let g = f.gap(x).unwrap();
            prop_assert!(g >= -1e-12 * (1.0 + a.max(b)) && g <= f.gap_bound * (1.0 + 1e-9));
        }

        #[test]
        fn denominator_is_positive_on_interval(a in 1e-3f64..1e3, b in 1e-3f64..1e3, s in 0.0f64..1.0) {
            let (tau, kappa) = bilinear_params(a, b).unwrap();
            let x = -a + (a + b) * s;
            prop_assert!(tau * x + kappa > 0.0);
        }

        #[test]
        fn doubling_holds(n in prop::sample::select(vec![1u32, 2, 4, 8]), nu in 0.1f64..5.0, s in 0.0f64..1.0) {
            let x = -nu + 10.0 * nu * s;
            let prev = phi(n, nu, x).unwrap();
            let next = phi(2 * n, nu, x).unwrap();
            if (2.0 * prev - x).abs() > 1e-6 {
                prop_assert!((phi_double(prev, x).unwrap() - next).abs() <= 1e-10 * (1.0 + next.abs()));
            }
        }
    }
}
