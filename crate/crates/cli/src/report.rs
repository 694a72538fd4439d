use passify_core::dissipation::DissipationReport;
use passify_core::passify::{PassivationResult, Reduction};
use passify_core::ramp::RampApproximant;
use serde::Serialize;

use crate::model::ModelFile;

#[derive(Debug, Serialize)]
pub struct Dissipation {
    pub delta_minus: f64,
    pub delta_plus: f64,
    pub bracket_low: f64,
    pub bracket_high: f64,
    pub bisection_iterations: usize,
    pub tolerance: f64,
    pub hinf_norm: f64,
    /// `null` when the infimum is approached as `ω → ∞`.
    pub omega_min: Option<f64>,
    pub classification: String,
}

impl From<&DissipationReport> for Dissipation {
    fn from(r: &DissipationReport) -> Self {
        Self {
            delta_minus: r.delta_minus,
            delta_plus: r.delta_plus,
            bracket_low: r.bracket_low,
            bracket_high: r.bracket_high,
            bisection_iterations: r.bisection_iterations,
            tolerance: r.tolerance,
            hinf_norm: r.hinf_norm,
            omega_min: r.omega_min,
            classification: r.classification.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Term {
    pub pole: [f64; 2],
    pub residue: [f64; 2],
}

#[derive(Debug, Serialize)]
pub struct Approximant {
    pub linear_slope: f64,
    pub linear_offset: f64,
    pub real_poles: Vec<f64>,
    pub real_residues: Vec<f64>,
    /// Each entry stands for a conjugate pair; values are `[re, im]`.
    pub complex_terms: Vec<Term>,
    pub alpha: f64,
    /// Upper end is `null` for `+∞`.
    pub interval: [Option<f64>; 2],
    pub denominator_degree: usize,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl From<&RampApproximant> for Approximant {
    fn from(f: &RampApproximant) -> Self {
        Self {
            linear_slope: f.linear_slope,
            linear_offset: f.linear_offset,
            real_poles: f.real_terms.iter().map(|t| t.pole).collect(),
            real_residues: f.real_terms.iter().map(|t| t.residue).collect(),
            complex_terms: f
                .complex_terms
                .iter()
                .map(|t| Term { pole: [t.pole.re, t.pole.im], residue: [t.residue.re, t.residue.im] })
                .collect(),
            alpha: f.gap_bound,
            interval: [finite(f.interval.0), finite(f.interval.1)],
            denominator_degree: f.denominator_degree(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReductionSummary {
    pub tolerance: f64,
    pub states_before: usize,
    pub states_after: usize,
    pub hankel_singular_values: Vec<f64>,
    pub discarded_sum: f64,
    pub rolled_back: bool,
}

impl ReductionSummary {
    pub fn new(r: &Reduction, tolerance: f64, states_before: usize) -> Self {
        Self {
            tolerance,
            states_before,
            states_after: r.system.states(),
            hankel_singular_values: r.hsv.clone(),
            discarded_sum: r.discarded_sum,
            rolled_back: r.rolled_back,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Passivation {
    pub method: String,
    pub nu: f64,
    pub alpha: f64,
    pub delta_minus: f64,
    pub delta_plus: f64,
    pub achieved_delta_minus: f64,
    pub states: usize,
    pub pole_estimate: usize,
    pub sweep_error: f64,
    pub relative_error_max: f64,
    pub relative_error_mean: f64,
    pub grid_points: usize,
    pub violations: Vec<String>,
    pub passive: bool,
    pub approximant: Approximant,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionSummary>,
    pub g: ModelFile,
}

impl Passivation {
    pub fn new(r: &PassivationResult, reduction: Option<ReductionSummary>, g: ModelFile) -> Self {
        Self {
            method: r.method.to_string(),
            nu: r.nu,
            alpha: r.alpha,
            delta_minus: r.delta_minus,
            delta_plus: r.delta_plus,
            achieved_delta_minus: r.achieved_delta_minus,
            states: r.states,
            pole_estimate: r.pole_estimate,
            sweep_error: r.sweep_error,
            relative_error_max: r.relative_error.max,
            relative_error_mean: r.relative_error.mean,
            grid_points: r.grid_points,
            violations: r.violations.clone(),
            passive: r.violations.is_empty(),
            approximant: Approximant::from(&r.approximant),
            reduction,
            g,
        }
    }
}
