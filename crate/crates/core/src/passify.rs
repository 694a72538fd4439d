//! Passivation algorithms, verification and optional order reduction.
//!
//! All methods start from `Z(s) = H(s) + H(−s)ᵀ`, whose Hermitian values on the
//! imaginary axis are `R(ω)`. A real-rational ramp approximant `f` with
//! `0 ≤ f(x) − max(x, 0) ≤ α` on the spectral range of `R` is applied to `Z`
//! as a matrix function, and the stable half of `f(Z)` plus the skew part
//! `½(D − Dᵀ)` of the original feedthrough is the passive model `G`. Then
//! `‖G(iω) + G(iω)ᴴ − R₊(ω)‖₂ ≤ α` for every `ω`.
//!
//! * [`shift_passify`]: `f(x) = x + ν`, i.e. `G = H + (ν/2)I`.
//! * [`passify_iterative`]: `Zₖ = Zₖ₋₁(2Zₖ₋₁ − Z)⁻¹Zₖ₋₁` starting at `Z + νI`.
//! * [`passify_partfrac`]: the partial fractions of `ν ζ₂ₘ(x/ν)`.
//! * [`passify_minimax`]: the bilinearly transported minimax approximant.

use std::fmt;


use crate::dissipation;
use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, DEFAULT_POINTS};
use crate::matkit::{self, RealMatrix};
use crate::nearness;
use crate::project;
use crate::ramp::{self, MinimaxTable, RampApproximant};
use crate::ss::{FrequencyResponse, ParaHermitianRealization, Realization};

/// Relative slack added to `|δ₋|` when forming `ν`.
pub const NU_SLACK: f64 = 1e-10;
const MIN_HSV_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Shift,
    Iterate { steps: u32 },
    PartFrac { m: u32 },
    Minimax { n: usize },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shift => write!(f, "shift"),
            Self::Iterate { steps } => write!(f, "iterate({steps})"),
            Self::PartFrac { m } => write!(f, "partfrac({m})"),
            Self::Minimax { n } => write!(f, "minimax({n})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PassifyOptions {
    /// Tolerance for the dissipation analysis of `H`; `None` picks
    /// `1e−12·(1 + ‖H‖∞)`.
    pub tol: Option<f64>,
    /// Points of the log-spaced verification grid.
    pub grid_points: usize,
    /// Run [`verify`] on the result.
    pub verify: bool,
}

impl Default for PassifyOptions {
    fn default() -> Self {
        Self { tol: None, grid_points: DEFAULT_POINTS, verify: true }
    }
}

/// Maximum and mean over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorStats {
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone)]
pub struct PassivationResult {
    pub g: Realization,
    pub method: Method,
    /// `|δ₋(H)|` plus slack.
    pub nu: f64,
    /// Guaranteed bound on `‖G(iω) + G(iω)ᴴ − R₊(ω)‖₂`.
    pub alpha: f64,
    /// The scalar function applied to `Z`.
    pub approximant: RampApproximant,
    /// Dissipation of the input model.
    pub delta_minus: f64,
    pub delta_plus: f64,
    /// Filled by [`verify`]; `NaN` before.
    pub achieved_delta_minus: f64,
    pub states: usize,
    /// `N(M + 1)` with `M` the denominator degree of the approximant.
    pub pole_estimate: usize,
    pub sweep_error: f64,
    pub relative_error: ErrorStats,
    pub grid_points: usize,
    /// Certificate violations found by [`verify`].
    pub violations: Vec<String>,
}

/// `N(M + 1)`: states of the passive model before any cancellation.
pub fn pole_estimate(n: usize, m: usize) -> usize {
    n * (m + 1)
}

struct Analysis {
    delta_minus: f64,
    delta_plus: f64,
    nu: f64,
    omega_min: Option<f64>,
    base: Realization,
}

fn analyze(h: &Realization, opts: &PassifyOptions) -> Result<Analysis> {
    h.require_hurwitz(0.0)?;
    let hinf = dissipation::hinf_norm(h, 1e-6)?;
    let tol = opts.tol.unwrap_or(1e-12 * (1.0 + hinf));
    let lower = dissipation::min_dissipation_with_norm(h, tol, hinf)?;
    let upper = dissipation::min_dissipation_with_norm(&h.negate(), tol, hinf)?;
    // conservative ends of the final brackets
    let delta_minus = lower.low;
    let delta_plus = -upper.low;
    let class_tol = 1e-8 * (1.0 + hinf);
    if delta_minus >= -class_tol {
        return Err(Error::NotPassifiable(format!("model is already passive (delta_minus = {delta_minus:e})")));
    }
    if delta_plus <= class_tol {
        return Err(Error::NotPassifiable(format!("model is anti-passive (delta_plus = {delta_plus:e})")));
    }
    let nu = delta_minus.abs() + NU_SLACK * (1.0 + delta_minus.abs());
    Ok(Analysis { delta_minus, delta_plus, nu, omega_min: lower.omega, base: working_realization(h) })
}

/// `f(Z)` for an approximant in partial-fraction form.
pub fn compose(f: &RampApproximant, z: &ParaHermitianRealization) -> Result<ParaHermitianRealization> {
    let zs = z.system();
    let p = zs.ports();
    let mut v = if f.linear_slope != 0.0 {
        zs.scale(f.linear_slope).add_identity(f.linear_offset)
    } else {
        Realization::constant(RealMatrix::identity(p, p) * f.linear_offset)?
    };
    for t in &f.real_terms {
        let term = zs.add_identity(-t.pole).inverse()?.scale(t.residue);
        v = v.add(&term)?;
    }
    for t in &f.complex_terms {
        v = v.add(&zs.real_part_shifted_inverse(t.pole, t.residue)?)?;
    }
    ParaHermitianRealization::assume_per_symmetric(v, z.source_d().clone())
}

fn finish(
    h: &Realization,
    v: &ParaHermitianRealization,
    method: Method,
    an: &Analysis,
    approximant: RampApproximant,
    opts: &PassifyOptions,
) -> Result<PassivationResult> {
    let g = project::stable_half_persym(v, &v.source_skew())?;
    package(h, g, method, an, approximant, opts)
}

fn package(
    h: &Realization,
    g: Realization,
    method: Method,
    an: &Analysis,
    approximant: RampApproximant,
    opts: &PassifyOptions,
) -> Result<PassivationResult> {
    let result = PassivationResult {
        states: g.states(),
        pole_estimate: pole_estimate(h.states(), approximant.denominator_degree()),
        g,
        method,
        nu: an.nu,
        alpha: approximant.gap_bound,
        approximant,
        delta_minus: an.delta_minus,
        delta_plus: an.delta_plus,
        achieved_delta_minus: f64::NAN,
        sweep_error: f64::NAN,
        relative_error: ErrorStats { max: f64::NAN, mean: f64::NAN },
        grid_points: 0,
        violations: Vec::new(),
    };
    if opts.verify {
        let mut grid = FrequencyGrid::verification(opts.grid_points)?;
        if let Some(w) = an.omega_min {
            grid = grid.with_point(w);
        }
        verify(h, result, &grid)
    } else {
        Ok(result)
    }
}

/// The scalar function each method applies for a given `ν`. `upper` is the
/// right end of the minimax interval and is ignored by the other methods.
pub fn approximant(method: Method, nu: f64, upper: f64) -> Result<RampApproximant> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::InvalidArgument(format!("nu must be positive and finite, got {nu}")));
    }
    match method {
        Method::Shift | Method::Iterate { steps: 0 } => Ok(RampApproximant::shift(nu)),
        Method::Iterate { steps } if steps > 16 => {
            Err(Error::InvalidArgument(format!("at most 16 steps are supported, got {steps}")))
        }
        Method::Iterate { steps } => Ok(ramp::zeta_partial_fractions(1 << (steps - 1))?.scaled(nu)),
        Method::PartFrac { m } => Ok(ramp::zeta_partial_fractions(m)?.scaled(nu)),
        Method::Minimax { n } => {
            let table = MinimaxTable::order4();
            if n != table.n {
                return Err(Error::InvalidArgument(format!("only the n = {} minimax table is built in", table.n)));
            }
            ramp::minimax_transformed(nu, upper, &table)
        }
    }
}

/// `G = H + (ν/2)I` with `α = ν`.
pub fn shift_passify(h: &Realization, opts: &PassifyOptions) -> Result<PassivationResult> {
    let an = analyze(h, opts)?;
    let g = h.add_identity(0.5 * an.nu);
    package(h, g, Method::Shift, &an, RampApproximant::shift(an.nu), opts)
}

/// `k` steps of the rational recurrence; `α = ν/2ᵏ`. The split is applied
/// once, to the final iterate.
pub fn passify_iterative(h: &Realization, steps: u32, opts: &PassifyOptions) -> Result<PassivationResult> {
    let an = analyze(h, opts)?;
    let method = Method::Iterate { steps };
    if steps == 0 {
        let g = h.add_identity(0.5 * an.nu);
        return package(h, g, method, &an, RampApproximant::shift(an.nu), opts);
    }
    if steps > 16 {
        return Err(Error::InvalidArgument(format!("at most 16 steps are supported, got {steps}")));
    }
    let z = an.base.para_hermitian();
    let base = z.system();
    let mut zk = base.add_identity(an.nu);
    for _ in 0..steps {
        let denom = zk.scale(2.0).add(&base.negate())?;
        zk = zk.multiply(&denom.inverse()?)?.multiply(&zk)?;
    }
    let v = ParaHermitianRealization::assume_per_symmetric(zk, h.d().clone())?;
    let approximant = approximant(method, an.nu, 0.0)?;
    finish(h, &v, method, &an, approximant, opts)
}

/// `f(x) = ν ζ₂ₘ(x/ν)` assembled term by term; `α = ν/(2m)` and `2Nm` states.
pub fn passify_partfrac(h: &Realization, m: u32, opts: &PassifyOptions) -> Result<PassivationResult> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let an = analyze(h, opts)?;
    let f = ramp::zeta_partial_fractions(m)?.scaled(an.nu);
    let v = compose(&f, &an.base.para_hermitian())?;
    finish(h, &v, Method::PartFrac { m }, &an, f, opts)
}

/// Minimax approximant on `[−ν, δ₊]`; `α = Eₙ·max(ν, δ₊)` and `N(2n + 1)`
/// states.
pub fn passify_minimax(h: &Realization, table: &MinimaxTable, opts: &PassifyOptions) -> Result<PassivationResult> {
    let an = analyze(h, opts)?;
    let b = an.delta_plus + NU_SLACK * (1.0 + an.delta_plus.abs());
    let f = ramp::minimax_transformed(an.nu, b, table)?;
    let v = compose(&f, &an.base.para_hermitian())?;
    finish(h, &v, Method::Minimax { n: table.n }, &an, f, opts)
}

/// Dispatches on `method`; minimax uses the built-in table.
pub fn passify(h: &Realization, method: Method, opts: &PassifyOptions) -> Result<PassivationResult> {
    match method {
        Method::Shift => shift_passify(h, opts),
        Method::Iterate { steps } => passify_iterative(h, steps, opts),
        Method::PartFrac { m } => passify_partfrac(h, m, opts),
        Method::Minimax { n } => {
            let table = MinimaxTable::order4();
            if n != table.n {
                return Err(Error::InvalidArgument(format!("only the n = {} minimax table is built in", table.n)));
            }
            passify_minimax(h, &table, opts)
        }
    }
}

/// Recomputes `δ₋(G)`, the sweep error against `R₊` and the relative error to
/// `H` on `grid`, and records certificate violations.
pub fn verify(h: &Realization, mut result: PassivationResult, grid: &FrequencyGrid) -> Result<PassivationResult> {
    let g = &result.g;
    let ghinf = dissipation::hinf_norm(g, 1e-6)?;
    result.achieved_delta_minus = dissipation::min_dissipation_with_norm(g, 1e-10 * (1.0 + ghinf), ghinf)?.value;
    let mut sweep: f64 = 0.0;
    let mut rel_max: f64 = 0.0;
    let mut rel_sum = 0.0;
    let (hr, gr) = (FrequencyResponse::new(h), FrequencyResponse::new(g));
    for w in grid.iter() {
        let hv = hr.freq(w)?;
        let gv = gr.freq(w)?;
        let target = nearness::nearest_psd(&(&hv + hv.adjoint()))?.projected;
        sweep = sweep.max(matkit::spectral_norm(&(&gv + gv.adjoint() - target)));
        let rel = matkit::spectral_norm(&(&gv - &hv)) / matkit::spectral_norm(&hv);
        rel_max = rel_max.max(rel);
        rel_sum += rel;
    }
    result.sweep_error = sweep;
    result.relative_error = ErrorStats { max: rel_max, mean: rel_sum / grid.len() as f64 };
    result.grid_points = grid.len();

    let alpha = result.alpha;
    result.violations.clear();
    if result.achieved_delta_minus < -1e-8 * (1.0 + alpha) {
        result
            .violations
            .push(format!("delta_minus(G) = {:e} is negative", result.achieved_delta_minus));
    }
    if sweep > alpha + 1e-6 * (1.0 + alpha) {
        result.violations.push(format!("sweep error {sweep:e} exceeds alpha = {alpha:e}"));
    }
    Ok(result)
}

/// Outcome of [`reduce`].
#[derive(Debug, Clone)]
pub struct Reduction {
    pub system: Realization,
    /// Hankel singular values of the input, descending.
    pub hsv: Vec<f64>,
    pub discarded_sum: f64,
    /// True when truncation destroyed passivity and the input was returned.
    pub rolled_back: bool,
}

/// Balanced truncation dropping Hankel singular values `≤ tol·σ₁`.
///
/// If the truncated model is less passive than the input beyond round-off,
/// the input is returned unchanged with `rolled_back = true`.
pub fn reduce(g: &Realization, tol: f64) -> Result<Reduction> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be nonnegative, got {tol}")));
    }
    g.require_hurwitz(0.0)?;
    let gb = g.balanced();
    if gb.states() == 0 {
        return Ok(Reduction { system: g.clone(), hsv: Vec::new(), discarded_sum: 0.0, rolled_back: false });
    }
    let (hsv, t, w) = balancing(&gb)?;
    let top = hsv.first().copied().unwrap_or(0.0);
    let r = hsv.iter().filter(|&&s| s > tol * top).count();
    let discarded_sum = hsv[r..].iter().sum();
    if r == gb.states() {
        return Ok(Reduction { system: g.clone(), hsv, discarded_sum, rolled_back: false });
    }
    let (t, w) = (t.columns(0, r), w.columns(0, r));
    let reduced = Realization::new(
        w.transpose() * gb.a() * t,
        w.transpose() * gb.b(),
        gb.c() * t,
        gb.d().clone(),
    )?;

    let ghinf = dissipation::hinf_norm(g, 1e-6)?;
    let before = dissipation::min_dissipation_with_norm(g, 1e-10 * (1.0 + ghinf), ghinf)?.value;
    let lost = match reduced.require_hurwitz(0.0) {
        Err(_) => true,
        Ok(()) => {
            let hinf = dissipation::hinf_norm(&reduced, 1e-6)?;
            let after = dissipation::min_dissipation_with_norm(&reduced, 1e-10 * (1.0 + hinf), hinf)?.value;
            after < before.min(0.0) - 1e-9 * (1.0 + hinf)
        }
    };
    if lost {
        return Ok(Reduction { system: g.clone(), hsv, discarded_sum, rolled_back: true });
    }
    Ok(Reduction { system: reduced, hsv, discarded_sum, rolled_back: false })
}

/// Hankel singular values in descending order with the matching columns of
/// the square-root balancing projections `T` and `W` (`WᵀT = I`).
fn balancing(gb: &Realization) -> Result<(Vec<f64>, RealMatrix, RealMatrix)> {
    let lp = gramian_factor(gb.a(), gb.b())?;
    let lq = gramian_factor(&gb.a().transpose(), &gb.c().transpose())?;
    let svd = (lq.transpose() * &lp).svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let n = gb.states();
    let mut t = RealMatrix::zeros(n, order.len());
    let mut w = RealMatrix::zeros(n, order.len());
    for (col, &i) in order.iter().enumerate() {
        let scale = 1.0 / svd.singular_values[i].sqrt();
        t.set_column(col, &(&lp * vt.row(i).transpose() * scale));
        w.set_column(col, &(&lq * u.column(i) * scale));
    }
    Ok((order.iter().map(|&i| svd.singular_values[i]).collect(), t, w))
}

/// Full-order balanced realization of `h`, used as the base of the
/// compositions. Falls back to diagonal balancing when `h` is not minimal
/// to working precision.
fn working_realization(h: &Realization) -> Realization {
    let hb = h.balanced();
    let n = hb.states();
    match balancing(&hb) {
        Ok((hsv, t, w)) if hsv.len() == n && n > 0 && hsv[n - 1] > MIN_HSV_RATIO * hsv[0] => {
            Realization::new(w.transpose() * hb.a() * &t, w.transpose() * hb.b(), hb.c() * &t, hb.d().clone())
                .unwrap_or(hb)
        }
        _ => hb,
    }
}

/// Low-rank `L` with `L Lᵀ = P` solving `AP + PAᵀ + BBᵀ = 0` for Hurwitz `A`,
/// from the factored matrix sign-function iteration.
pub fn gramian_factor(a: &RealMatrix, b: &RealMatrix) -> Result<RealMatrix> {
    let n = a.nrows();
    let mut ak = a.clone();
    let mut bk = b.clone();
    for _ in 0..100 {
        let lu = ak.clone().lu();
        let logdet: f64 = lu.u().diagonal().iter().map(|v| v.abs().ln()).sum();
        let c = (logdet / n as f64).exp();
        let inv = lu.try_inverse().ok_or_else(|| Error::Singular("sign-function iterate".into()))?;
        let next = (&ak / c + &inv * c) * 0.5;
        let mut wide = RealMatrix::zeros(n, 2 * bk.ncols());
        wide.columns_mut(0, bk.ncols()).copy_from(&(&bk / c.sqrt()));
        wide.columns_mut(bk.ncols(), bk.ncols()).copy_from(&(&inv * &bk * c.sqrt()));
        bk = compress(&(wide / 2f64.sqrt()));
        let change = (&next - &ak).norm();
        ak = next;
        if change <= 1e-12 * ak.norm() {
            let residual = (&ak + RealMatrix::identity(n, n)).norm();
            if residual > 1e-6 * (n as f64).sqrt() {
                return Err(Error::NoConvergence(n));
            }
            return Ok(bk / 2f64.sqrt());
        }
    }
    Err(Error::NoConvergence(n))
}

/// Column compression `M ↦ UΣ` dropping negligible singular values.
fn compress(m: &RealMatrix) -> RealMatrix {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested");
    let top = svd.singular_values.max();
    let cutoff = m.nrows() as f64 * f64::EPSILON * top;
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > cutoff).collect();
    let mut out = RealMatrix::zeros(m.nrows(), keep.len().max(1));
    for (col, &i) in keep.iter().enumerate() {
        out.set_column(col, &(u.column(i) * svd.singular_values[i]));
    }
    out
}
