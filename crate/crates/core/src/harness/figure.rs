use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::table::{fmt_f64, header, indexed, write_csv};
use crate::dynamics::{
    bifurcation_scan, lyapunov_estimate, BifurcationColumn, MapKind, BIFURCATION_BURN_IN,
    BIFURCATION_GRID, BIFURCATION_RECORD,
};
use crate::objectives::builtin;
use crate::stats;
use crate::stochastic::tail::{log_histogram, tail_slope, LogBin, TailFit};
use crate::stochastic::{sample_levy_step, LevyParams, RngStream};
use crate::swarm::{run, OptimizerConfig, Stop, TrialRecord};
use crate::walks::{
    ensemble_fractional_msd, ensemble_msd, simulate_walk, DiffusionStats, StepLaw, WalkPath,
    WalkSpec,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkKind {
    /// Unit-variance Gaussian coordinates.
    Brownian,
    /// Random direction, Mantegna step length.
    Levy,
}

impl WalkKind {
    pub fn law(self, beta: f64, min_step: f64) -> Result<StepLaw> {
        Ok(match self {
            WalkKind::Brownian => StepLaw::Gaussian { sigma: 1.0 },
            WalkKind::Levy => StepLaw::Levy(LevyParams::new(beta, 1.0, min_step)?),
        })
    }
}

impl FromStr for WalkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brownian" => Ok(WalkKind::Brownian),
            "levy" => Ok(WalkKind::Levy),
            other => Err(Error::config(
                "kind",
                format!("unknown walk kind `{other}` (brownian, levy)"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureKind {
    Bifurcation,
    LevySteps,
    LevyPath,
    Msd,
    Trace,
}

impl FromStr for FigureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "bifurcation" => Ok(FigureKind::Bifurcation),
            "levy_steps" => Ok(FigureKind::LevySteps),
            "levy_path" => Ok(FigureKind::LevyPath),
            "msd" => Ok(FigureKind::Msd),
            "trace" => Ok(FigureKind::Trace),
            _ => Err(Error::config(
                "kind",
                format!(
                    "unknown figure kind `{s}` (bifurcation, levy_steps, levy_path, msd, trace)"
                ),
            )),
        }
    }
}

/// Parameters for [`emit_figure_data`]; each kind reads the fields it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FigureParams {
    pub seed: u64,
    pub beta: f64,
    /// Steps for walks and step samples.
    pub steps: usize,
    pub dim: usize,
    pub walk: WalkKind,
    pub ensemble: usize,
    pub min_step: f64,
    /// Moment order for `msd`.
    pub moment: f64,
    pub map: MapKind,
    pub from: f64,
    pub to: f64,
    pub grid: usize,
    pub burn_in: usize,
    pub record: usize,
    pub u0: f64,
    pub algo: String,
    pub objective: String,
    pub max_evals: u64,
}

impl Default for FigureParams {
    fn default() -> Self {
        FigureParams {
            seed: 1,
            beta: 1.0,
            steps: 250,
            dim: 2,
            walk: WalkKind::Brownian,
            ensemble: 10_000,
            min_step: 0.0,
            moment: 2.0,
            map: MapKind::FaExact,
            from: 0.5,
            to: 4.5,
            grid: BIFURCATION_GRID,
            burn_in: BIFURCATION_BURN_IN,
            record: BIFURCATION_RECORD,
            u0: 0.3,
            algo: "fa".into(),
            objective: "sphere".into(),
            max_evals: 10_000,
        }
    }
}

/// Writes the CSV behind one figure.
///
/// | kind | columns |
/// |---|---|
/// | `bifurcation` | `param,state` |
/// | `levy_steps` | `step,value` |
/// | `levy_path` | `step,x_0,...` (first row at the origin) |
/// | `msd` | `t,msd` |
/// | `trace` | `iter,best_value,alpha_t` |
pub fn emit_figure_data(kind: FigureKind, p: &FigureParams, out: &Path) -> Result<()> {
    match kind {
        FigureKind::Bifurcation => {
            let cols = bifurcation_scan(p.map, p.from, p.to, p.grid, p.u0, p.burn_in, p.record)?;
            write_bifurcation(out, &cols)
        }
        FigureKind::LevySteps => {
            let steps = levy_steps(p.beta, p.steps, p.seed)?;
            let rows = steps
                .iter()
                .enumerate()
                .map(|(k, &s)| vec![(k + 1).to_string(), fmt_f64(s)]);
            write_csv(out, &header(&["step", "value"]), rows)
        }
        FigureKind::LevyPath => {
            let path = walk(WalkKind::Levy, p.dim, p.steps, p.beta, p.seed)?;
            write_walk(out, &path)
        }
        FigureKind::Msd => {
            let stats = msd(&MsdRequest {
                kind: p.walk,
                dim: p.dim,
                ensemble: p.ensemble,
                steps: p.steps,
                beta: p.beta,
                min_step: p.min_step,
                moment: p.moment,
                seed: p.seed,
            })?;
            write_msd(out, &stats)
        }
        FigureKind::Trace => {
            let rec = trace(&p.algo, &p.objective, p.dim, p.max_evals, p.seed)?;
            super::experiment::write_trace(out, &rec)
        }
    }
}

/// `n` Mantegna steps with unit scale from one stream.
pub fn levy_steps(beta: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    let params = LevyParams::new(beta, 1.0, 0.0)?;
    let mut rng = RngStream::new(seed);
    Ok((0..n)
        .map(|_| sample_levy_step(&mut rng, &params))
        .collect())
}

pub fn walk(kind: WalkKind, dim: usize, steps: usize, beta: f64, seed: u64) -> Result<WalkPath> {
    let spec = WalkSpec::new(dim, steps, kind.law(beta, 0.0)?);
    simulate_walk(&mut RngStream::new(seed), &spec)
}

pub fn write_walk(out: &Path, path: &WalkPath) -> Result<()> {
    let mut cols = header(&["step"]);
    cols.extend(indexed("x", path.dim));
    let rows = path.positions.iter().enumerate().map(|(k, x)| {
        let mut row = vec![k.to_string()];
        row.extend(x.iter().map(|&v| fmt_f64(v)));
        row
    });
    write_csv(out, &cols, rows)
}

/// About `n` distinct integers spread geometrically over `1..=steps`.
pub fn log_times(steps: usize, n: usize) -> Vec<usize> {
    if steps == 0 || n == 0 {
        return Vec::new();
    }
    let top = (steps as f64).ln();
    let denom = (n.max(2) - 1) as f64;
    let mut out: Vec<usize> = (0..n.max(2))
        .map(|i| ((top * i as f64 / denom).exp().round() as usize).clamp(1, steps))
        .collect();
    out.dedup();
    out
}

/// An ensemble displacement measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MsdRequest {
    pub kind: WalkKind,
    pub dim: usize,
    pub ensemble: usize,
    pub steps: usize,
    pub beta: f64,
    pub min_step: f64,
    /// Moment order `q`; 2 gives the plain msd, smaller values the
    /// fractional form `<|x|^q>^(2/q)`.
    pub moment: f64,
    pub seed: u64,
}

impl MsdRequest {
    pub fn new(kind: WalkKind, dim: usize, ensemble: usize, steps: usize) -> Self {
        MsdRequest {
            kind,
            dim,
            ensemble,
            steps,
            beta: 1.5,
            min_step: 0.0,
            moment: 2.0,
            seed: 1,
        }
    }
}

/// Ensemble msd at 30 log-spaced times in `1..=steps`.
pub fn msd(req: &MsdRequest) -> Result<DiffusionStats> {
    if req.steps < 2 {
        return Err(Error::config("steps", "msd needs at least 2 steps"));
    }
    let spec = WalkSpec::new(req.dim, req.steps, req.kind.law(req.beta, req.min_step)?);
    let times = log_times(req.steps, 30);
    if req.moment == 2.0 {
        ensemble_msd(&spec, req.ensemble, req.seed, &times)
    } else {
        ensemble_fractional_msd(&spec, req.ensemble, req.seed, &times, req.moment)
    }
}

pub fn write_msd(out: &Path, stats: &DiffusionStats) -> Result<()> {
    let rows = stats
        .times
        .iter()
        .zip(&stats.msd)
        .map(|(t, m)| vec![t.to_string(), fmt_f64(*m)]);
    write_csv(out, &header(&["t", "msd"]), rows)
}

/// One row per recorded state; a diverged parameter gets a single `inf` row.
pub fn write_bifurcation(out: &Path, cols: &[BifurcationColumn]) -> Result<()> {
    let rows = cols.iter().flat_map(|c| {
        let param = fmt_f64(c.param);
        let states: Vec<f64> = if c.diverged {
            vec![f64::INFINITY]
        } else {
            c.states.clone()
        };
        states
            .into_iter()
            .map(move |s| vec![param.clone(), fmt_f64(s)])
    });
    write_csv(out, &header(&["param", "state"]), rows)
}

/// Lyapunov estimates on an even grid; `NaN` where the orbit diverges.
pub fn lyapunov_scan(
    map: MapKind,
    from: f64,
    to: f64,
    grid: usize,
    u0: f64,
    iterations: usize,
) -> Result<Vec<(f64, f64)>> {
    if grid < 2 {
        return Err(Error::config(
            "grid",
            format!("need at least 2 parameter values, got {grid}"),
        ));
    }
    if iterations < 1000 {
        return Err(Error::config(
            "iterations",
            format!("need at least 1000, got {iterations}"),
        ));
    }
    let last = (grid - 1) as f64;
    Ok((0..grid)
        .into_par_iter()
        .map(|i| {
            let p = from + (to - from) * (i as f64 / last);
            (
                p,
                lyapunov_estimate(map, p, u0, iterations).unwrap_or(f64::NAN),
            )
        })
        .collect())
}

pub fn write_lyapunov(out: &Path, rows: &[(f64, f64)]) -> Result<()> {
    let rows = rows.iter().map(|&(p, l)| vec![fmt_f64(p), fmt_f64(l)]);
    write_csv(out, &header(&["param", "lyapunov"]), rows)
}

/// Histogram of `|s|` for `samples` Mantegna steps on 40 log bins between
/// the 0.1% and 99.9% quantiles, plus the tail fit.
pub fn levy_hist(beta: f64, samples: usize, seed: u64) -> Result<(Vec<LogBin>, TailFit)> {
    let steps = levy_steps(beta, samples, seed)?;
    let fit = tail_slope(&steps)?;
    let mags = stats::sorted(&steps.iter().map(|s| s.abs()).collect::<Vec<_>>());
    let lo = stats::quantile_sorted(&mags, 0.001).max(f64::MIN_POSITIVE);
    let hi = stats::quantile_sorted(&mags, 0.999);
    Ok((log_histogram(&mags, lo, hi, 40)?, fit))
}

pub fn write_hist(out: &Path, bins: &[LogBin]) -> Result<()> {
    let rows = bins.iter().map(|b| {
        vec![
            fmt_f64(b.lo),
            fmt_f64(b.hi),
            b.count.to_string(),
            fmt_f64(b.density),
        ]
    });
    write_csv(out, &header(&["lo", "hi", "count", "density"]), rows)
}

/// One default-configured run on a builtin objective.
pub fn trace(
    algo: &str,
    objective: &str,
    dim: usize,
    max_evals: u64,
    seed: u64,
) -> Result<TrialRecord> {
    let cfg = OptimizerConfig::default_for(algo)?;
    let obj = builtin(objective, dim, None)?;
    let stop = Stop {
        target_value: None,
        max_evals: Some(max_evals),
    };
    run(&cfg, &obj, seed, &stop)
}
