mod model;
mod report;
mod sweep;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use passify_core::dissipation::{self, Classification};
use passify_core::grid::{FrequencyGrid, DEFAULT_POINTS, DEFAULT_RANGE};
use passify_core::passify::{self, Method, PassifyOptions};

use model::ModelFile;

const GRID_ENV: &str = "PASSIFY_GRID_POINTS";

#[derive(Parser)]
#[command(name = "passify", version, about = "Passivity checks and global passivity enforcement for state-space models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a model; exit 0 if passive, 1 if not.
    Check {
        model: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Full dissipation report as JSON.
    Dissipation {
        model: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Build a passive model and print the run report as JSON.
    Passify {
        model: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        /// Tolerance of the dissipation analysis of the input.
        #[arg(long)]
        tol: Option<f64>,
        /// Balanced truncation tolerance applied to the result.
        #[arg(long)]
        reduce: Option<f64>,
        /// Where to write the passive model.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frequency response and smallest Hermitian-part eigenvalue as CSV.
    Freqresp {
        model: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative error between two models as CSV.
    Compare {
        reference: PathBuf,
        other: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the scalar approximant of a method as JSON.
    DumpApproximant {
        #[command(flatten)]
        method: MethodArgs,
        /// Take the interval from this model, as `passify` would.
        #[arg(long, conflicts_with_all = ["nu", "upper"])]
        model: Option<PathBuf>,
        /// Left end of the interval is `−nu`.
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        /// Right end of the minimax interval; defaults to `nu`.
        #[arg(long)]
        upper: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodKind {
    Shift,
    Iterate,
    Partfrac,
    Minimax,
}

#[derive(Args)]
struct MethodArgs {
    #[arg(long, value_enum)]
    method: MethodKind,
    /// Recurrence steps for `iterate`.
    #[arg(long)]
    steps: Option<u32>,
    /// Half the order of the partial-fraction approximant.
    #[arg(long)]
    m: Option<u32>,
    /// Minimax table order.
    #[arg(long, default_value_t = 4)]
    n: usize,
}

impl MethodArgs {
    fn method(&self) -> Result<Method> {
        Ok(match self.method {
            MethodKind::Shift => Method::Shift,
            MethodKind::Iterate => Method::Iterate {
                steps: self.steps.ok_or_else(|| anyhow!("--method iterate requires --steps"))?,
            },
            MethodKind::Partfrac => Method::PartFrac {
                m: self.m.ok_or_else(|| anyhow!("--method partfrac requires --m"))?,
            },
            MethodKind::Minimax => Method::Minimax { n: self.n },
        })
    }
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = DEFAULT_RANGE.0)]
    wmin: f64,
    #[arg(long, default_value_t = DEFAULT_RANGE.1)]
    wmax: f64,
    /// Defaults to $PASSIFY_GRID_POINTS, then 2000.
    #[arg(long)]
    points: Option<usize>,
    /// Log-spaced instead of linearly spaced frequencies.
    #[arg(long)]
    log: bool,
}

impl GridArgs {
    fn grid(&self) -> Result<FrequencyGrid> {
        let points = match self.points {
            Some(p) => p,
            None => grid_points()?,
        };
        if !(self.wmin < self.wmax) {
            bail!("--wmin must be below --wmax");
        }
        let grid = if self.log {
            FrequencyGrid::log(self.wmin, self.wmax, points)
        } else {
            FrequencyGrid::linear(self.wmin, self.wmax, points)
        };
        Ok(grid?)
    }
}

fn grid_points() -> Result<usize> {
    match std::env::var(GRID_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("{GRID_ENV}={v:?} is not a point count"))?;
            if n < 2 {
                bail!("{GRID_ENV} must be at least 2, got {n}");
            }
            Ok(n)
        }
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_POINTS),
        Err(e) => Err(anyhow!("{GRID_ENV}: {e}")),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn warn_skipped(skipped: usize) {
    if skipped > 0 {
        eprintln!("warning: {skipped} frequencies skipped, see comment rows");
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check { model, tol } => {
            let h = model::load(&model)?;
            let r = dissipation::classify(&h, tol)?;
            println!("delta_minus: {:.15e}", r.delta_minus);
            println!("delta_plus: {:.15e}", r.delta_plus);
            println!("classification: {}", r.classification);
            Ok(if r.classification == Classification::Passive { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Dissipation { model, tol } => {
            let h = model::load(&model)?;
            let r = dissipation::classify(&h, tol)?;
            emit(&json(&report::Dissipation::from(&r))?, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Passify { model, method, tol, reduce, out } => {
            let file = ModelFile::read(&model)?;
            let h = file.to_realization().with_context(|| format!("invalid model in {}", model.display()))?;
            let opts = PassifyOptions { tol, grid_points: grid_points()?, verify: true };
            let r = passify::passify(&h, method.method()?, &opts)?;
            let (g, reduction) = match reduce {
                Some(t) => {
                    let red = passify::reduce(&r.g, t)?;
                    let summary = report::ReductionSummary::new(&red, t, r.states);
                    (red.system, Some(summary))
                }
                None => (r.g.clone(), None),
            };
            let name = file.name().map(|n| format!("{n} passive ({})", r.method));
            let g = ModelFile::from_realization(&g, name);
            if let Some(path) = &out {
                g.write(path)?;
            }
            emit(&json(&report::Passivation::new(&r, reduction, g))?, None)?;
            Ok(if r.violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Freqresp { model, grid, out } => {
            let h = model::load(&model)?;
            let (csv, skipped) = sweep::frequency_response(&h, &grid.grid()?)?;
            warn_skipped(skipped);
            emit(&csv, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { reference, other, grid, out } => {
            let h = model::load(&reference)?;
            let g = model::load(&other)?;
            let (csv, skipped) = sweep::relative_error(&h, &g, &grid.grid()?)?;
            warn_skipped(skipped);
            emit(&csv, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DumpApproximant { method, model, nu, upper } => {
            let method = method.method()?;
            let f = match model {
                Some(path) => {
                    let h = model::load(&path)?;
                    let opts = PassifyOptions { verify: false, ..PassifyOptions::default() };
                    passify::passify(&h, method, &opts)?.approximant
                }
                None => passify::approximant(method, nu, upper.unwrap_or(nu))?,
            };
            emit(&json(&report::Approximant::from(&f))?, None)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
