use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use passify_core::ss::RationalEntry;
use passify_core::{RealMatrix, Realization};
use serde::{Deserialize, Serialize};

/// A model on disk. `kind` selects the representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelFile {
    Ss {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        #[serde(rename = "B")]
        b: Vec<Vec<f64>>,
        #[serde(rename = "C")]
        c: Vec<Vec<f64>>,
        #[serde(rename = "D")]
        d: Vec<Vec<f64>>,
    },
    Tf {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        num: Vec<f64>,
        den: Vec<f64>,
    },
    Tfm {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        entries: Vec<Vec<Entry>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

fn matrix(field: &str, rows: &[Vec<f64>], nrows: usize, ncols: usize) -> Result<RealMatrix> {
    if rows.len() != nrows && !(nrows == 0 && rows.is_empty()) {
        bail!("field {field}: expected {nrows} rows, found {}", rows.len());
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            bail!("field {field}: row {} has {} entries, expected {ncols}", i + 1, row.len());
        }
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            bail!("field {field}: entry ({}, {}) is not finite", i + 1, j + 1);
        }
    }
    Ok(RealMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl ModelFile {
    pub fn name(&self) -> Option<&str> {
        match self {
            Self::Ss { name, .. } | Self::Tf { name, .. } | Self::Tfm { name, .. } => name.as_deref(),
        }
    }

    pub fn from_realization(h: &Realization, name: Option<String>) -> Self {
        Self::Ss { name, a: rows(h.a()), b: rows(h.b()), c: rows(h.c()), d: rows(h.d()) }
    }

    pub fn to_realization(&self) -> Result<Realization> {
        match self {
            Self::Ss { a, b, c, d, .. } => {
                let (n, p) = (a.len(), d.len());
                if p == 0 {
                    bail!("field D: at least one port is required");
                }
                let a = matrix("A", a, n, n)?;
                let b = matrix("B", b, n, p)?;
                let c = matrix("C", c, p, n)?;
                let d = matrix("D", d, p, p)?;
                Ok(Realization::new(a, b, c, d)?)
            }
            Self::Tf { num, den, .. } => {
                Realization::from_tf(num, den).context("fields num/den")
            }
            Self::Tfm { entries, .. } => {
                let p = entries.len();
                if p == 0 {
                    bail!("field entries: empty transfer matrix");
                }
                for (i, row) in entries.iter().enumerate() {
                    if row.len() != p {
                        bail!("field entries: row {} has {} entries, expected {p}", i + 1, row.len());
                    }
                }
                let grid: Vec<Vec<RationalEntry>> = entries
                    .iter()
                    .map(|row| row.iter().map(|e| RationalEntry::new(e.num.clone(), e.den.clone())).collect())
                    .collect();
                Realization::from_rational_matrix(&grid).context("field entries")
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid model file {}", path.display()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
    }
}

pub fn load(path: &Path) -> Result<Realization> {
    let file = ModelFile::read(path)?;
    file.to_realization().with_context(|| format!("invalid model in {}", path.display()))
}
