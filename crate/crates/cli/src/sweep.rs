use std::fmt::Write as _;

use anyhow::{bail, Result};
use passify_core::grid::FrequencyGrid;
use passify_core::matkit;
use passify_core::ss::FrequencyResponse;
use passify_core::Realization;

pub fn header(p: usize) -> String {
    let mut h = String::from("omega");
    for i in 1..=p {
        for j in 1..=p {
            write!(h, ",re_{i}{j},im_{i}{j}").unwrap();
        }
    }
    h.push_str(",lambda_min");
    h
}

fn num(v: f64) -> String {
    format!("{v:.15e}")
}

/// Frequency response with `λ_min(H(iω) + H(iω)ᴴ)` per row. Frequencies at
/// which the evaluation fails become comment rows.
pub fn frequency_response(h: &Realization, grid: &FrequencyGrid) -> Result<(String, usize)> {
    let fr = FrequencyResponse::new(h);
    let p = h.ports();
    let mut out = header(p);
    out.push('\n');
    let mut skipped = 0;
    for w in grid.iter() {
        let v = match fr.freq(w) {
            Ok(v) => v,
            Err(e) => {
                skipped += 1;
                writeln!(out, "# skipped omega={}: {e}", num(w)).unwrap();
                continue;
            }
        };
        let lmin = matkit::hermitian_eigenvalues(&(&v + v.adjoint()))?[0];
        out.push_str(&num(w));
        for i in 0..p {
            for j in 0..p {
                write!(out, ",{},{}", num(v[(i, j)].re), num(v[(i, j)].im)).unwrap();
            }
        }
        writeln!(out, ",{}", num(lmin)).unwrap();
    }
    Ok((out, skipped))
}

/// `‖G(iω) − H(iω)‖₂ / ‖H(iω)‖₂` along `grid`.
pub fn relative_error(h: &Realization, g: &Realization, grid: &FrequencyGrid) -> Result<(String, usize)> {
    if h.ports() != g.ports() {
        bail!("port dimensions differ: {} vs {}", h.ports(), g.ports());
    }
    let (hf, gf) = (FrequencyResponse::new(h), FrequencyResponse::new(g));
    let mut out = String::from("omega,relerr\n");
    let mut skipped = 0;
    for w in grid.iter() {
        match (hf.freq(w), gf.freq(w)) {
            (Ok(hv), Ok(gv)) => {
                let err = matkit::spectral_norm(&(&gv - &hv)) / matkit::spectral_norm(&hv);
                writeln!(out, "{},{}", num(w), num(err)).unwrap();
            }
            (Err(e), _) | (_, Err(e)) => {
                skipped += 1;
                writeln!(out, "# skipped omega={}: {e}", num(w)).unwrap();
            }
        }
    }
    Ok((out, skipped))
}
