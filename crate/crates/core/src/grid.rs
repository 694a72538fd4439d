//! Angular-frequency grids for sweeps and verification.

use crate::error::{Error, Result};

/// Point count of the default verification grid.
pub const DEFAULT_POINTS: usize = 2000;
/// Range of the default verification grid in rad/s.
pub const DEFAULT_RANGE: (f64, f64) = (1e-4, 1e6);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Ascending list of angular frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    omegas: Vec<f64>,
    spacing: Spacing,
}

impl FrequencyGrid {
    pub fn linear(lo: f64, hi: f64, points: usize) -> Result<Self> {
        check_range(lo, hi, points)?;
        let step = (hi - lo) / (points - 1) as f64;
        let mut omegas: Vec<f64> = (0..points).map(|k| lo + step * k as f64).collect();
        omegas[points - 1] = hi;
        Ok(Self { omegas, spacing: Spacing::Linear })
    }

    pub fn log(lo: f64, hi: f64, points: usize) -> Result<Self> {
        check_range(lo, hi, points)?;
        if lo <= 0.0 {
            return Err(Error::InvalidArgument(format!("log grid needs a positive lower bound, got {lo}")));
        }
        let (l, h) = (lo.log10(), hi.log10());
        let mut omegas: Vec<f64> = (0..points)
            .map(|k| 10f64.powf(l + (h - l) * k as f64 / (points - 1) as f64))
            .collect();
        omegas[0] = lo;
        omegas[points - 1] = hi;
        Ok(Self { omegas, spacing: Spacing::Log })
    }

    /// `points` log-spaced frequencies over [`DEFAULT_RANGE`].
    pub fn verification(points: usize) -> Result<Self> {
        Self::log(DEFAULT_RANGE.0, DEFAULT_RANGE.1, points)
    }

    /// Inserts `omega`, keeping the list sorted and free of duplicates.
    pub fn with_point(mut self, omega: f64) -> Self {
        if omega.is_finite() && omega >= 0.0 {
            if let Err(pos) = self.omegas.binary_search_by(|w| w.total_cmp(&omega)) {
                self.omegas.insert(pos, omega);
            }
        }
        self
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.omegas.iter().copied()
    }
}

fn check_range(lo: f64, hi: f64, points: usize) -> Result<()> {
    if points < 2 {
        return Err(Error::InvalidArgument(format!("a grid needs at least 2 points, got {points}")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidArgument(format!("invalid frequency range [{lo}, {hi}]")));
    }
    if lo < 0.0 {
        return Err(Error::InvalidArgument(format!("frequencies must be nonnegative, got {lo}")));
    }
    Ok(())
}
