//! Minimum and maximum dissipation of a stable model.
//!
//! For `R(ω) = H(iω) + H(iω)ᴴ` the minimum dissipation is
//! `δ₋ = inf_ω λ_min(R(ω))` and the maximum dissipation is
//! `δ₊ = sup_ω λ_max(R(ω))`. A stable model is passive exactly when `δ₋ ≥ 0`.
//!
//! `δ₋` is located by bisection. A level `δ` below `λ_min(D + Dᵀ)` lies above
//! `δ₋` precisely when some eigenvalue curve of `R(ω)` crosses `δ`, which shows
//! up as a purely imaginary eigenvalue of the Hamiltonian matrix
//! `N_δ = diag(A, −Aᵀ) + [B; −Cᵀ](δI − D − Dᵀ)⁻¹[C, Bᵀ]`.
//! The test is only used on `[−2‖H‖∞ − margin, λ_min(D + Dᵀ)]`; above the
//! feedthrough spectrum it carries no monotone information.

use std::fmt;

use crate::error::{Error, Result};
use crate::matkit::{self, RealMatrix};
use crate::ss::{FrequencyResponse, Realization};

/// Largest admissible condition number of `δI − D − Dᵀ`.
const MAX_LEVEL_CONDITION: f64 = 1e12;
const MAX_RETRIES: usize = 3;
const MAX_ITERATIONS: usize = 200;
const LEVEL_SET_ITERATIONS: usize = 30;

/// Passivity class of a stable model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// `δ₋ ≥ −tol`.
    Passive,
    /// `δ₋ < 0 < δ₊`.
    Passifiable,
    /// `δ₊ ≤ tol`.
    AntiPassive,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Passive => "passive",
            Self::Passifiable => "non-passive, passifiable",
            Self::AntiPassive => "anti-passive",
        })
    }
}

/// Outcome of a dissipation analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipationReport {
    pub delta_minus: f64,
    pub delta_plus: f64,
    /// Initial bisection bracket for `δ₋`.
    pub bracket_low: f64,
    pub bracket_high: f64,
    /// Iterations spent on both bisections.
    pub bisection_iterations: usize,
    pub tolerance: f64,
    pub hinf_norm: f64,
    /// Frequency at which `λ_min(R(ω))` approaches `δ₋`; `None` means `ω → ∞`.
    pub omega_min: Option<f64>,
    pub classification: Classification,
}

/// Result of one bisection run.
#[derive(Debug, Clone, PartialEq)]
pub struct Bisection {
    /// `λ_min(R(ω))` at `omega` when that sample closes the bracket,
    /// otherwise the bracket midpoint.
    pub value: f64,
    /// Final bracket; the true value lies inside it.
    pub low: f64,
    pub high: f64,
    pub initial_low: f64,
    pub initial_high: f64,
    pub iterations: usize,
    pub omega: Option<f64>,
}

/// `N_δ = diag(A, −Aᵀ) + [B; −Cᵀ](δI − D − Dᵀ)⁻¹[C, Bᵀ]`.
pub fn hamiltonian(h: &Realization, delta: f64) -> Result<RealMatrix> {
    let (n, p) = (h.states(), h.ports());
    let mut level = -(h.d() + h.d().transpose());
    for i in 0..p {
        level[(i, i)] += delta;
    }
    let cond = matkit::condition_number(&level);
    if !(cond <= MAX_LEVEL_CONDITION) {
        return Err(Error::Singular(format!("delta I - D - D^T at delta = {delta}")));
    }
    let inv = level.try_inverse().ok_or_else(|| Error::Singular(format!("delta = {delta}")))?;
    let mut left = RealMatrix::zeros(2 * n, p);
    left.view_mut((0, 0), (n, p)).copy_from(h.b());
    left.view_mut((n, 0), (n, p)).copy_from(&(-h.c().transpose()));
    let mut right = RealMatrix::zeros(p, 2 * n);
    right.view_mut((0, 0), (p, n)).copy_from(h.c());
    right.view_mut((0, n), (p, n)).copy_from(&h.b().transpose());
    let mut out = left * inv * right;
    let mut top = out.view_mut((0, 0), (n, n));
    top += h.a();
    let mut bottom = out.view_mut((n, n), (n, n));
    bottom -= h.a().transpose();
    Ok(out)
}

/// Absolute band around the imaginary axis used for eigenvalues of `m`.
///
/// The norm is taken after diagonal balancing, which leaves the eigenvalues
/// unchanged but removes the artificial scale of companion-form data.
pub fn imaginary_tolerance(m: &RealMatrix) -> f64 {
    1e-8 * (1.0 + matkit::spectral_norm_estimate(&matkit::balance(m).0))
}

/// Nonnegative frequencies `|Im λ|` of the eigenvalues of `m` lying within
/// `imaginary_tolerance(m)` of the imaginary axis.
pub fn imaginary_frequencies(m: &RealMatrix) -> Result<Vec<f64>> {
    let (balanced, _) = matkit::balance(m);
    let tol = 1e-8 * (1.0 + matkit::spectral_norm_estimate(&balanced));
    let mut out: Vec<f64> = matkit::schur(&balanced)?
        .eigenvalues()
        .into_iter()
        .filter(|l| l.re.abs() <= tol && l.im >= 0.0)
        .map(|l| l.im)
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn lambda_min(fr: &FrequencyResponse, omega: f64) -> Result<f64> {
    Ok(matkit::hermitian_eigenvalues(&fr.hermitian_part(omega)?)?[0])
}

fn sigma_max(fr: &FrequencyResponse, omega: f64) -> Result<f64> {
    Ok(matkit::spectral_norm(&fr.freq(omega)?))
}

/// Default bisection tolerance `1e−8·(1 + ‖H‖∞)`.
pub fn default_tolerance(h: &Realization) -> Result<f64> {
    Ok(1e-8 * (1.0 + hinf_norm(h, 1e-6)?))
}

/// `λ_min(D + Dᵀ)`, the value of `λ_min(R(ω))` as `ω → ∞`.
pub fn feedthrough_min(h: &Realization) -> f64 {
    let dd = h.d() + h.d().transpose();
    nalgebra::SymmetricEigen::new(dd).eigenvalues.min()
}

/// `δ₋(H)` within `tol`.
pub fn min_dissipation(h: &Realization, tol: f64) -> Result<f64> {
    Ok(min_dissipation_detailed(h, tol)?.value)
}

/// `δ₋(H)` with the final bracket, iteration count and minimizing frequency.
pub fn min_dissipation_detailed(h: &Realization, tol: f64) -> Result<Bisection> {
    h.require_hurwitz(0.0)?;
    let hinf = hinf_norm(h, 1e-6)?;
    min_dissipation_with_norm(h, tol, hinf)
}

/// [`min_dissipation_detailed`] for a caller that already knows `‖H‖∞`,
/// which fixes the lower end of the initial bracket.
pub fn min_dissipation_with_norm(h: &Realization, tol: f64, hinf: f64) -> Result<Bisection> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    h.require_hurwitz(0.0)?;
    let hb = h.balanced();
    let fr = FrequencyResponse::new(&hb);
    let initial_high = feedthrough_min(&hb);
    let margin = 1e-3 * (1.0 + hinf);
    let initial_low = (-2.0 * hinf - margin).min(initial_high - margin);

    let (mut lo, mut hi) = (initial_low, initial_high);
    let mut omega = None;
    let mut iterations = 0;
    // whether `hi` is a sampled value of λ_min(R(ω)) rather than a bisection point
    let mut attained = true;

    // level-set descent: every confirmed crossing supplies sampled values of
    // λ_min(R(ω)), each an upper bound on δ₋
    while hi - lo > tol && iterations < LEVEL_SET_ITERATIONS {
        iterations += 1;
        let level = hi - tol;
        match probe(&hb, &fr, level, tol)? {
            Some((w, v)) if v < hi => {
                omega = Some(w);
                attained = v >= lo;
                hi = v.max(lo);
            }
            Some(_) => break,
            None => {
                lo = level;
                break;
            }
        }
    }

    while hi - lo > tol {
        if iterations >= MAX_ITERATIONS {
            return Err(Error::NoConvergence(2 * hb.states()));
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        match probe(&hb, &fr, mid, tol)? {
            Some((w, v)) => {
                omega = Some(w);
                attained = v >= lo && v <= mid;
                hi = mid.min(v.max(lo));
            }
            None => lo = mid,
        }
    }
    Ok(Bisection {
        value: if attained { hi } else { 0.5 * (lo + hi) },
        low: lo,
        high: hi,
        initial_low,
        initial_high,
        iterations,
        omega,
    })
}

/// Smallest sampled `λ_min(R(ω))` and its frequency when a crossing of
/// `delta` is confirmed.
fn probe(h: &Realization, fr: &FrequencyResponse, delta: f64, tol: f64) -> Result<Option<(f64, f64)>> {
    match crossing_frequencies(h, delta, tol)? {
        Some(freqs) => confirm_crossing(fr, delta, &freqs, 0.25 * tol),
        None => Ok(None),
    }
}

/// Frequencies at which some eigenvalue of `R(ω)` equals `delta`, or `None`
/// when there is no crossing. A level that lands on the feedthrough spectrum
/// is nudged by `tol` and retried.
fn crossing_frequencies(h: &Realization, delta: f64, tol: f64) -> Result<Option<Vec<f64>>> {
    let mut level = delta;
    for attempt in 0..=MAX_RETRIES {
        match hamiltonian(h, level) {
            Ok(n) => {
                let freqs = imaginary_frequencies(&n)?;
                return Ok((!freqs.is_empty()).then_some(freqs));
            }
            Err(Error::Singular(msg)) if attempt == MAX_RETRIES => return Err(Error::Singular(msg)),
            Err(Error::Singular(_)) => level -= tol,
            Err(e) => return Err(e),
        }
    }
    unreachable!()
}

/// Checks candidate crossings against `R(ω)` directly.
///
/// The set `{ω : λ_min(R(ω)) < δ}` is a union of intervals whose endpoints are
/// crossing frequencies, so probing the candidates, their midpoints, zero and
/// a point beyond the last candidate finds a frequency with
/// `λ_min(R(ω)) ≤ δ + slack` whenever `δ` is meaningfully above `δ₋`.
/// Near-axis eigenvalues that do not correspond to a crossing are discarded.
fn confirm_crossing(fr: &FrequencyResponse, delta: f64, freqs: &[f64], slack: f64) -> Result<Option<(f64, f64)>> {
    let mut probes = vec![0.0];
    probes.extend_from_slice(freqs);
    probes.extend(freqs.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    if let Some(&last) = freqs.last() {
        probes.push(2.0 * last + 1.0);
    }
    let mut best: Option<(f64, f64)> = None;
    for w in probes {
        let v = lambda_min(fr, w)?;
        if best.is_none_or(|(_, b)| v < b) {
            best = Some((w, v));
        }
    }
    Ok(best.filter(|&(_, v)| v <= delta + slack))
}

/// `δ₊(H) = −δ₋(−H)`.
pub fn max_dissipation(h: &Realization, tol: f64) -> Result<f64> {
    Ok(-min_dissipation(&h.negate(), tol)?)
}

/// `‖H‖∞ = sup_ω ‖H(iω)‖₂` within relative tolerance `tol`.
///
/// Uses the level-set iteration: the imaginary-axis zeros of
/// `γ²I − H(−s)ᵀH(s)` mark frequency intervals where `‖H(iω)‖₂ > γ`, and the
/// norm at their midpoints raises the lower bound until no crossing remains.
pub fn hinf_norm(h: &Realization, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    h.require_hurwitz(0.0)?;
    let h = h.balanced();
    let fr = FrequencyResponse::new(&h);
    let mut lb = matkit::spectral_norm(h.d()).max(sigma_max(&fr, 0.0)?);
    for l in h.poles()? {
        let w = l.norm();
        if w > 0.0 {
            lb = lb.max(sigma_max(&fr, w)?);
        }
    }
    if lb == 0.0 || h.states() == 0 {
        return Ok(lb);
    }
    let adjoint = h.para_adjoint();
    let gram = adjoint.multiply(&h)?.negate();
    for _ in 0..MAX_ITERATIONS {
        let gamma = lb * (1.0 + 2.0 * tol);
        let phi = gram.add_identity(gamma * gamma);
        let zeros = match phi.inverse() {
            Ok(inv) => imaginary_frequencies(inv.a())?,
            Err(Error::IllConditioned(_)) => return Ok(lb),
            Err(e) => return Err(e),
        };
        if zeros.is_empty() {
            return Ok(lb);
        }
        let mut next = lb;
        for pair in zeros.windows(2) {
            next = next.max(sigma_max(&fr, 0.5 * (pair[0] + pair[1]))?);
        }
        for &w in &zeros {
            next = next.max(sigma_max(&fr, w)?);
        }
        if next <= gamma {
            return Ok(lb);
        }
        lb = next;
    }
    Err(Error::NoConvergence(2 * h.states()))
}

/// Full dissipation analysis. `tol = None` selects [`default_tolerance`].
pub fn classify(h: &Realization, tol: Option<f64>) -> Result<DissipationReport> {
    h.require_hurwitz(0.0)?;
    let hinf = hinf_norm(h, 1e-6)?;
    let tol = tol.unwrap_or(1e-8 * (1.0 + hinf));
    let lower = min_dissipation_with_norm(h, tol, hinf)?;
    let upper = min_dissipation_with_norm(&h.negate(), tol, hinf)?;
    let delta_minus = lower.value;
    let delta_plus = -upper.value;
    let classification = if delta_minus >= -tol {
        Classification::Passive
    } else if delta_plus <= tol {
        Classification::AntiPassive
    } else {
        Classification::Passifiable
    };
    Ok(DissipationReport {
        delta_minus,
        delta_plus,
        bracket_low: lower.initial_low,
        bracket_high: lower.initial_high,
        bisection_iterations: lower.iterations + upper.iterations,
        tolerance: tol,
        hinf_norm: hinf,
        omega_min: lower.omega,
        classification,
    })
}

/// True when `N_δ` has an eigenvalue inside the imaginary-axis band.
pub fn has_imaginary_eigenvalue(h: &Realization, delta: f64) -> Result<bool> {
    Ok(!imaginary_frequencies(&hamiltonian(h, delta)?)?.is_empty())
}

/// Smallest eigenvalue of `H(iω) + H(iω)ᴴ`.
pub fn min_eigenvalue_at(h: &Realization, omega: f64) -> Result<f64> {
    Ok(matkit::hermitian_eigenvalues(&h.hermitian_part(omega)?)?[0])
}
