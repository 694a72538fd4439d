//! Additive stable/anti-stable decomposition and the stable half of a
//! per-symmetric transfer function.
//!
//! A per-symmetric `V(s) = V(−s)ᵀ` without imaginary-axis poles can be written
//! as `V(s) = X(s) + X(−s)ᵀ` with `X` stable. The decomposition orders the real
//! Schur form of `A` so that the stable eigenvalues lead, removes the coupling
//! block with a Sylvester solve, and reads off the two halves.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matkit::{self, Block, RealMatrix};
use crate::ss::{ParaHermitianRealization, Realization};

const RETRY_SEED: u64 = 0x5eed_5eed;
const RESIDUAL_POINTS: usize = 50;

/// Stable and anti-stable parts of a realization.
#[derive(Debug, Clone)]
pub struct SplitResult {
    /// Eigenvalues strictly in the open left half-plane; feedthrough `½D`.
    pub stable: Realization,
    /// Eigenvalues strictly in the open right half-plane; feedthrough `½D`.
    pub anti: Realization,
    /// Feedthrough given to each half.
    pub d_split: RealMatrix,
    /// Largest relative reconstruction error on a log grid.
    pub residual: f64,
    /// Whether the random-similarity retry was needed.
    pub retried: bool,
}

/// Default axis band `1e−7·(1 + ‖A‖₂)`.
pub fn default_axis_tolerance(v: &Realization) -> f64 {
    1e-7 * (1.0 + matkit::spectral_norm(v.a()))
}

/// Splits `V(s)` into stable and anti-stable parts plus `½D` each.
///
/// `tol = None` uses [`default_axis_tolerance`] of the balanced realization.
pub fn stable_antistable_split(v: &Realization, tol: Option<f64>) -> Result<SplitResult> {
    let vb = v.balanced();
    let tol = tol.unwrap_or_else(|| default_axis_tolerance(&vb));
    if let Some(&l) = vb.poles()?.iter().find(|l| l.re.abs() <= tol) {
        return Err(Error::ImaginaryAxisPole(l));
    }
    let (mut result, retried) = match split_ordered(&vb) {
        Ok(r) => (r, false),
        Err(Error::ReorderFailed { .. }) | Err(Error::SpectraOverlap { .. }) => {
            let mut rng = ChaCha8Rng::seed_from_u64(RETRY_SEED);
            let q = matkit::random_orthogonal(vb.states(), &mut rng);
            (split_ordered(&vb.similarity(&q)?)?, true)
        }
        Err(e) => return Err(e),
    };
    result.retried = retried;
    result.residual = split_residual(v, &result)?;
    Ok(result)
}

fn split_ordered(v: &Realization) -> Result<SplitResult> {
    let n = v.states();
    let half_d = v.d() * 0.5;
    let form = matkit::real_schur(v.a(), |l| l.re < 0.0)?;
    let k = form.selected_dim();
    let t = &form.t;
    let t11 = t.view((0, 0), (k, k)).into_owned();
    let t12 = t.view((0, k), (k, n - k)).into_owned();
    let t22 = t.view((k, k), (n - k, n - k)).into_owned();
    let lead: Vec<Block> = form.blocks().iter().copied().filter(|b| b.start < k).collect();
    let trail: Vec<Block> = form
        .blocks()
        .iter()
        .filter(|b| b.start >= k)
        .map(|b| Block { start: b.start - k, size: b.size })
        .collect();
    let x = matkit::solve_quasi_triangular_sylvester(&t11, &lead, &t22, &trail, &(-&t12))?;

    // S = [[I, X], [0, I]] block-diagonalizes T
    let qb = form.q.transpose() * v.b();
    let cq = v.c() * &form.q;
    let b1 = qb.rows(0, k) - &x * qb.rows(k, n - k);
    let b2 = qb.rows(k, n - k).into_owned();
    let c1 = cq.columns(0, k).into_owned();
    let c2 = cq.columns(0, k) * &x + cq.columns(k, n - k);
    Ok(SplitResult {
        stable: Realization::new(t11, b1, c1, half_d.clone())?,
        anti: Realization::new(t22, b2, c2, half_d.clone())?,
        d_split: half_d,
        residual: 0.0,
        retried: false,
    })
}

/// Log-spaced frequencies spanning the eigenvalue magnitudes of `a`.
fn residual_frequencies(a: &RealMatrix) -> Result<Vec<f64>> {
    let mags: Vec<f64> = matkit::eigenvalues(a)?.iter().map(|l| l.norm()).filter(|&m| m > 0.0).collect();
    let lo = mags.iter().copied().fold(1.0, f64::min) * 0.1;
    let hi = mags.iter().copied().fold(1.0, f64::max) * 10.0;
    let (l, h) = (lo.log10(), hi.log10());
    Ok((0..RESIDUAL_POINTS)
        .map(|k| 10f64.powf(l + (h - l) * k as f64 / (RESIDUAL_POINTS - 1) as f64))
        .collect())
}

fn split_residual(v: &Realization, split: &SplitResult) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for w in residual_frequencies(v.a())? {
        let s = Complex64::new(0.0, w);
        let target = v.eval(s)?;
        let sum = split.stable.eval(s)? + split.anti.eval(s)?;
        worst = worst.max((&sum - &target).camax() / (1.0 + target.camax()));
    }
    Ok(worst)
}

/// Largest distance between an eigenvalue of `A` and the mirror image
/// `−λ̄` of its nearest partner, relative to `1 + |λ|`. Per-symmetric inputs
/// give values at round-off level.
pub fn mirror_symmetry_defect(v: &Realization) -> Result<f64> {
    let poles = v.poles()?;
    let mut worst: f64 = 0.0;
    for l in &poles {
        let mirror = -l.conj();
        let d = poles.iter().map(|m| (m - mirror).norm()).fold(f64::INFINITY, f64::min);
        worst = worst.max(d / (1.0 + l.norm()));
    }
    Ok(worst)
}

/// Stable half `X(s) = X_stab(s) + ½D + E` of a per-symmetric `V`, so that
/// `X(iω) + X(iω)ᴴ = V(iω)` and the skew part of `X(∞)` is `E`.
pub fn stable_half_persym(v: &ParaHermitianRealization, skew: &RealMatrix) -> Result<Realization> {
    let p = v.system().ports();
    if skew.shape() != (p, p) {
        return Err(Error::Dimension(format!("skew term is {:?}, expected ({p}, {p})", skew.shape())));
    }
    let defect = (skew + skew.transpose()).amax();
    if defect > 1e-12 * (1.0 + skew.amax()) {
        return Err(Error::NotSkew(defect));
    }
    let split = stable_antistable_split(v.system(), None)?;
    split.stable.add_const(skew)
}
