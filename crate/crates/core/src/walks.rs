//! Random walks `S_N = S_(N-1) + X_N` with Gaussian, uniform or Levy steps,
//! their mean-squared displacement, and the random-walk step-size heuristic.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::stats;
use crate::stochastic::{sample_levy_step, standard_normal, LevyParams, RngStream};
use crate::{Error, Result};

/// Walks per work unit in [`ensemble_msd`]. Fixed so that sums do not depend
/// on the thread count.
const ENSEMBLE_CHUNK: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Gaussian,
    Levy,
    Uniform,
}

/// Distribution of a single step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepLaw {
    /// Independent `N(0, sigma^2)` coordinates.
    Gaussian { sigma: f64 },
    /// Independent `U(-half_width, half_width)` coordinates.
    Uniform { half_width: f64 },
    /// Uniformly random direction with a Mantegna step length.
    Levy(LevyParams),
}

impl StepLaw {
    pub fn kind(&self) -> StepKind {
        match self {
            StepLaw::Gaussian { .. } => StepKind::Gaussian,
            StepLaw::Uniform { .. } => StepKind::Uniform,
            StepLaw::Levy(_) => StepKind::Levy,
        }
    }

    /// Per-coordinate mean-squared step, the `s^2` in `D = s^2 / (2 tau)`.
    /// Infinite for Levy steps.
    pub fn coordinate_second_moment(&self) -> f64 {
        match self {
            StepLaw::Gaussian { sigma } => sigma * sigma,
            StepLaw::Uniform { half_width } => half_width * half_width / 3.0,
            StepLaw::Levy(_) => f64::INFINITY,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            StepLaw::Gaussian { sigma } if !(sigma.is_finite() && sigma >= 0.0) => Err(
                Error::domain(format!("gaussian step sigma must be >= 0, got {sigma}")),
            ),
            StepLaw::Uniform { half_width } if !(half_width.is_finite() && half_width >= 0.0) => {
                Err(Error::domain(format!(
                    "uniform step half-width must be >= 0, got {half_width}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Draws one `dim`-dimensional step into `out`.
    pub fn sample_into(&self, rng: &mut RngStream, out: &mut [f64]) {
        match *self {
            StepLaw::Gaussian { sigma } => out
                .iter_mut()
                .for_each(|x| *x = sigma * standard_normal(rng)),
            StepLaw::Uniform { half_width } => out
                .iter_mut()
                .for_each(|x| *x = half_width * (2.0 * rng.next_f64() - 1.0)),
            StepLaw::Levy(p) => {
                random_direction(rng, out);
                let len = sample_levy_step(rng, &p).abs();
                out.iter_mut().for_each(|x| *x *= len);
            }
        }
    }
}

/// Unit vector uniform on the sphere: a normalized vector of standard normals.
pub fn random_direction(rng: &mut RngStream, out: &mut [f64]) {
    loop {
        let mut norm2 = 0.0;
        for x in out.iter_mut() {
            *x = standard_normal(rng);
            norm2 += *x * *x;
        }
        if norm2 > 0.0 {
            let n = norm2.sqrt();
            out.iter_mut().for_each(|x| *x /= n);
            return;
        }
    }
}

/// What to simulate.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkSpec {
    pub dim: usize,
    pub steps: usize,
    pub law: StepLaw,
    /// Time per jump.
    pub tau: f64,
    /// Drift velocity `v0`; each jump adds `v0 * tau`.
    pub drift: Option<Vec<f64>>,
    /// Starting point; the origin when absent.
    pub origin: Option<Vec<f64>>,
}

impl WalkSpec {
    pub fn new(dim: usize, steps: usize, law: StepLaw) -> Self {
        Self {
            dim,
            steps,
            law,
            tau: 1.0,
            drift: None,
            origin: None,
        }
    }

    pub fn with_drift(mut self, v0: Vec<f64>) -> Self {
        self.drift = Some(v0);
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::domain("walk dimension must be >= 1"));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::domain(format!("tau must be > 0, got {}", self.tau)));
        }
        for (what, v) in [("drift", &self.drift), ("origin", &self.origin)] {
            if let Some(v) = v {
                if v.len() != self.dim {
                    return Err(Error::domain(format!(
                        "{what} has dimension {}, expected {}",
                        v.len(),
                        self.dim
                    )));
                }
            }
        }
        self.law.validate()
    }
}

/// A simulated walk: `positions[k + 1] = positions[k] + steps[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkPath {
    pub dim: usize,
    pub positions: Vec<Vec<f64>>,
    pub steps: Vec<Vec<f64>>,
    pub step_kind: StepKind,
    pub tau: f64,
}

impl WalkPath {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Recomputes the positions from the origin and the stored steps.
    pub fn rebuild_positions(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.positions.len());
        let mut cur = self.positions[0].clone();
        out.push(cur.clone());
        for step in &self.steps {
            for (c, s) in cur.iter_mut().zip(step) {
                *c += s;
            }
            out.push(cur.clone());
        }
        out
    }

    /// `|positions[t] - positions[0]|^2`
    pub fn squared_displacement(&self, t: usize) -> f64 {
        self.positions[t]
            .iter()
            .zip(&self.positions[0])
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

/// Simulates one walk of `spec.steps` jumps.
pub fn simulate_walk(rng: &mut RngStream, spec: &WalkSpec) -> Result<WalkPath> {
    spec.validate()?;
    let d = spec.dim;
    let mut positions = Vec::with_capacity(spec.steps + 1);
    let mut steps = Vec::with_capacity(spec.steps);
    let mut cur = spec.origin.clone().unwrap_or_else(|| vec![0.0; d]);
    positions.push(cur.clone());
    let mut step = vec![0.0; d];
    for _ in 0..spec.steps {
        draw_step(rng, spec, &mut step);
        for (c, s) in cur.iter_mut().zip(&step) {
            *c += s;
        }
        steps.push(step.clone());
        positions.push(cur.clone());
    }
    Ok(WalkPath {
        dim: d,
        positions,
        steps,
        step_kind: spec.law.kind(),
        tau: spec.tau,
    })
}

fn draw_step(rng: &mut RngStream, spec: &WalkSpec, out: &mut [f64]) {
    spec.law.sample_into(rng, out);
    if let Some(v0) = &spec.drift {
        for (x, v) in out.iter_mut().zip(v0) {
            *x += v * spec.tau;
        }
    }
}

/// Ensemble mean-squared displacement at selected step indices.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffusionStats {
    pub times: Vec<usize>,
    pub msd: Vec<f64>,
    /// Exponent of a log-log least-squares fit `msd ~ c t^e` over the points
    /// with `t > 0` and `msd > 0`; `None` when fewer than two such points.
    pub fitted_exponent: Option<f64>,
    pub fitted_coefficient: Option<f64>,
}

impl DiffusionStats {
    fn from_sums(times: Vec<usize>, sums: Vec<f64>, n: usize) -> Self {
        Self::from_msd(times, sums.into_iter().map(|s| s / n as f64).collect())
    }

    fn from_msd(times: Vec<usize>, msd: Vec<f64>) -> Self {
        let (x, y): (Vec<f64>, Vec<f64>) = times
            .iter()
            .zip(&msd)
            .filter(|(t, m)| **t > 0 && **m > 0.0 && m.is_finite())
            .map(|(t, m)| ((*t as f64).ln(), m.ln()))
            .unzip();
        let fit = stats::ols(&x, &y);
        DiffusionStats {
            times,
            msd,
            fitted_exponent: fit.map(|f| f.0),
            fitted_coefficient: fit.map(|f| f.1.exp()),
        }
    }

    /// Least-squares fit of `msd = a t^2 + b t` (no intercept), returning
    /// `(a, b)`: `a` estimates `|v0|^2` and `b` estimates `2 d D`.
    pub fn fit_drift_diffusion(&self) -> Option<(f64, f64)> {
        let (mut s4, mut s3, mut s2, mut y2, mut y1) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&t, &m) in self.times.iter().zip(&self.msd) {
            let t = t as f64;
            s4 += t.powi(4);
            s3 += t.powi(3);
            s2 += t * t;
            y2 += m * t * t;
            y1 += m * t;
        }
        let det = s4 * s2 - s3 * s3;
        if det.abs() <= f64::EPSILON * s4 * s2 {
            return None;
        }
        Some(((y2 * s2 - s3 * y1) / det, (s4 * y1 - s3 * y2) / det))
    }
}

fn check_times(times: &[usize], len: usize) -> Result<()> {
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("msd times must be strictly increasing"));
    }
    if let Some(&t) = times.last() {
        if t >= len {
            return Err(Error::domain(format!(
                "msd time {t} exceeds path length {len}"
            )));
        }
    }
    Ok(())
}

/// Mean-squared displacement of an ensemble of stored paths.
pub fn estimate_msd(paths: &[WalkPath], times: &[usize]) -> Result<DiffusionStats> {
    let first = paths
        .first()
        .ok_or_else(|| Error::domain("msd needs a non-empty ensemble"))?;
    if let Some(p) = paths
        .iter()
        .find(|p| p.dim != first.dim || p.step_kind != first.step_kind)
    {
        return Err(Error::domain(format!(
            "ensemble mixes walks: ({}, {:?}) vs ({}, {:?})",
            first.dim, first.step_kind, p.dim, p.step_kind
        )));
    }
    let shortest = paths.iter().map(WalkPath::len).min().unwrap_or(0);
    check_times(times, shortest)?;
    let mut sums = vec![0.0; times.len()];
    for p in paths {
        for (s, &t) in sums.iter_mut().zip(times) {
            *s += p.squared_displacement(t);
        }
    }
    Ok(DiffusionStats::from_sums(times.to_vec(), sums, paths.len()))
}

/// Simulates `ensemble` walks (walker `m` uses child stream `m` of `seed`)
/// and accumulates their mean-squared displacement without keeping paths.
///
/// Runs in parallel on the current rayon pool; the result does not depend on
/// the number of threads.
pub fn ensemble_msd(
    spec: &WalkSpec,
    ensemble: usize,
    seed: u64,
    times: &[usize],
) -> Result<DiffusionStats> {
    let sums = ensemble_sums(spec, ensemble, seed, times, |r2| r2)?;
    Ok(DiffusionStats::from_sums(times.to_vec(), sums, ensemble))
}

/// Like [`ensemble_msd`] but reports `<|x_t - x_0|^q>^(2/q)`.
///
/// For Levy steps with index `beta` the plain msd is infinite and its sample
/// value is dominated by the single largest jump. Any `q < beta` keeps the
/// moment finite while preserving the `t^(2/beta)` growth, so the fitted
/// exponent is stable from seed to seed. `q = 2` is the plain msd.
pub fn ensemble_fractional_msd(
    spec: &WalkSpec,
    ensemble: usize,
    seed: u64,
    times: &[usize],
    q: f64,
) -> Result<DiffusionStats> {
    if !(q > 0.0 && q <= 2.0) {
        return Err(Error::domain(format!(
            "moment order must be in (0, 2], got {q}"
        )));
    }
    let half = q / 2.0;
    let sums = ensemble_sums(spec, ensemble, seed, times, |r2| r2.powf(half))?;
    let msd = sums
        .into_iter()
        .map(|s| (s / ensemble as f64).powf(2.0 / q))
        .collect();
    Ok(DiffusionStats::from_msd(times.to_vec(), msd))
}

fn ensemble_sums(
    spec: &WalkSpec,
    ensemble: usize,
    seed: u64,
    times: &[usize],
    moment: impl Fn(f64) -> f64 + Sync,
) -> Result<Vec<f64>> {
    spec.validate()?;
    if ensemble == 0 {
        return Err(Error::domain("msd needs a non-empty ensemble"));
    }
    check_times(times, spec.steps + 1)?;
    let chunks: Vec<Vec<f64>> = (0..ensemble.div_ceil(ENSEMBLE_CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut sums = vec![0.0; times.len()];
            let mut step = vec![0.0; spec.dim];
            for m in c * ENSEMBLE_CHUNK..((c + 1) * ENSEMBLE_CHUNK).min(ensemble) {
                let mut rng = RngStream::child(seed, m as u64);
                let mut cur = spec.origin.clone().unwrap_or_else(|| vec![0.0; spec.dim]);
                let start = cur.clone();
                let mut next = 0;
                for k in 0..=spec.steps {
                    if k > 0 {
                        draw_step(&mut rng, spec, &mut step);
                        cur.iter_mut().zip(&step).for_each(|(c, s)| *c += s);
                    }
                    if next < times.len() && times[next] == k {
                        let r2: f64 = cur.iter().zip(&start).map(|(a, b)| (a - b) * (a - b)).sum();
                        sums[next] += moment(r2);
                        next += 1;
                    }
                }
            }
            sums
        })
        .collect();
    let mut sums = vec![0.0; times.len()];
    for c in chunks {
        sums.iter_mut().zip(c).for_each(|(s, v)| *s += v);
    }
    Ok(sums)
}

/// Step size from `r^2 = 2 d D t` with `D = s^2 / (2 tau)` and `r = r_fraction * L`:
/// `s = sqrt(tau) * r_fraction * L / sqrt(t * d)`.
pub fn recommended_step_size(
    scale: f64,
    dim: usize,
    iterations: u64,
    tau: f64,
    r_fraction: f64,
) -> Result<f64> {
    if !(scale > 0.0 && tau > 0.0 && r_fraction > 0.0) || dim == 0 || iterations == 0 {
        return Err(Error::domain(format!(
            "step size needs positive inputs, got L={scale}, d={dim}, t={iterations}, tau={tau}, r={r_fraction}"
        )));
    }
    Ok(tau.sqrt() * (r_fraction * scale) / ((iterations as f64) * dim as f64).sqrt())
}

/// [`recommended_step_size`] with `tau = 1` and `r = L / 10`.
pub fn default_step_size(scale: f64, dim: usize, iterations: u64) -> Result<f64> {
    recommended_step_size(scale, dim, iterations, 1.0, 0.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gaussian(dim: usize, steps: usize) -> WalkSpec {
        WalkSpec::new(dim, steps, StepLaw::Gaussian { sigma: 1.0 })
    }

    #[test]
    fn empty_walk_is_origin() {
        let p = simulate_walk(&mut RngStream::new(1), &gaussian(3, 0)).unwrap();
        assert_eq!(p.positions, vec![vec![0.0; 3]]);
        assert!(p.steps.is_empty());
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut r = RngStream::new(1);
        assert!(simulate_walk(&mut r, &gaussian(0, 5)).is_err());
        assert!(simulate_walk(&mut r, &gaussian(2, 5).with_tau(0.0)).is_err());
        assert!(simulate_walk(&mut r, &gaussian(2, 5).with_drift(vec![1.0])).is_err());
        assert!(simulate_walk(
            &mut r,
            &WalkSpec::new(1, 5, StepLaw::Gaussian { sigma: -1.0 })
        )
        .is_err());
    }

    #[test]
    fn path_recursion_is_exact() {
        let levy = LevyParams::new(1.0, 1.0, 0.0).unwrap();
        for law in [
            StepLaw::Gaussian { sigma: 0.3 },
            StepLaw::Uniform { half_width: 2.0 },
            StepLaw::Levy(levy),
        ] {
            let p = simulate_walk(&mut RngStream::new(5), &WalkSpec::new(3, 200, law)).unwrap();
            assert_eq!(p.len(), 201);
            assert_eq!(p.rebuild_positions(), p.positions);
            for k in 0..200 {
                for i in 0..3 {
                    let diff = p.positions[k + 1][i] - p.positions[k][i];
                    assert!(
                        (diff - p.steps[k][i]).abs() <= 1e-12 * (1.0 + p.positions[k][i].abs())
                    );
                }
            }
        }
    }

    #[test]
    fn levy_steps_have_levy_lengths() {
        // Direction is a unit vector, so every step length is a Mantegna magnitude.
        let levy = LevyParams::new(1.5, 1.0, 0.2).unwrap();
        let p = simulate_walk(
            &mut RngStream::new(2),
            &WalkSpec::new(2, 500, StepLaw::Levy(levy)),
        )
        .unwrap();
        for s in &p.steps {
            assert!(s.iter().map(|v| v * v).sum::<f64>().sqrt() >= 0.2 - 1e-12);
        }
    }

    #[test]
    fn stationary_path_has_zero_msd() {
        let spec = WalkSpec::new(2, 20, StepLaw::Gaussian { sigma: 0.0 });
        let p = simulate_walk(&mut RngStream::new(1), &spec).unwrap();
        let st = estimate_msd(&[p], &[0, 5, 10, 20]).unwrap();
        assert!(st.msd.iter().all(|m| *m == 0.0));
        assert!(st.fitted_exponent.is_none());
    }

    #[test]
    fn msd_errors() {
        assert!(estimate_msd(&[], &[1]).is_err());
        let mut r = RngStream::new(1);
        let a = simulate_walk(&mut r, &gaussian(1, 10)).unwrap();
        let b = simulate_walk(&mut r, &gaussian(2, 10)).unwrap();
        assert!(estimate_msd(&[a.clone(), b], &[1]).is_err());
        assert!(estimate_msd(std::slice::from_ref(&a), &[11]).is_err());
        assert!(estimate_msd(&[a], &[3, 2]).is_err());
    }

    #[test]
    fn streaming_matches_stored_paths() {
        let spec = gaussian(2, 50);
        let times: Vec<usize> = (0..=50).step_by(5).collect();
        let paths: Vec<WalkPath> = (0..300)
            .map(|m| simulate_walk(&mut RngStream::child(9, m), &spec).unwrap())
            .collect();
        let a = estimate_msd(&paths, &times).unwrap();
        let b = ensemble_msd(&spec, 300, 9, &times).unwrap();
        for (x, y) in a.msd.iter().zip(&b.msd) {
            assert!((x - y).abs() <= 1e-12 * x.max(1.0));
        }
    }

    #[test]
    fn brownian_slope_is_2dd() {
        // d = 1, sigma = s = 1, tau = 1: msd(t) = 2 d D t with D = s^2 / (2 tau) = 1/2.
        let times: Vec<usize> = (1..=100).collect();
        let st = ensemble_msd(&gaussian(1, 100), 10_000, 3, &times).unwrap();
        let d_coef = 1.0 / 2.0;
        let want = 2.0 * 1.0 * d_coef;
        let slope = st.msd[99] / 100.0;
        assert!((slope - want).abs() < 0.05 * want, "slope {slope}");
        assert!((st.fitted_exponent.unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn drift_is_recovered() {
        let v0 = vec![0.3, -0.4];
        let spec = gaussian(2, 200).with_drift(v0.clone());
        let times: Vec<usize> = (1..=200).collect();
        let st = ensemble_msd(&spec, 20_000, 17, &times).unwrap();
        let (a, b) = st.fit_drift_diffusion().unwrap();
        let want = 0.3 * 0.3 + 0.4 * 0.4;
        assert!((a - want).abs() < 0.1 * want, "a = {a}");
        // the diffusive term sits under a t^2 signal, so only its scale is checked
        assert!((b - 2.0).abs() < 0.5, "b = {b}");
    }

    #[test]
    fn second_order_moment_is_plain_msd() {
        let spec = gaussian(2, 40);
        let times = [1, 5, 40];
        let a = ensemble_msd(&spec, 300, 3, &times).unwrap();
        let b = ensemble_fractional_msd(&spec, 300, 3, &times, 2.0).unwrap();
        assert_eq!(a, b);
        assert!(ensemble_fractional_msd(&spec, 300, 3, &times, 0.0).is_err());
        assert!(ensemble_fractional_msd(&spec, 300, 3, &times, 2.5).is_err());
    }

    #[test]
    fn first_absolute_moment_of_brownian_walk() {
        // <|x_t|> = sqrt(2 t / pi) for unit Gaussian steps in one dimension
        let times = [10, 100, 400];
        let st = ensemble_fractional_msd(&gaussian(1, 400), 20_000, 8, &times, 1.0).unwrap();
        for (&t, &m) in times.iter().zip(&st.msd) {
            let want = 2.0 * t as f64 / std::f64::consts::PI;
            assert!((m / want - 1.0).abs() < 0.03, "t {t}: {m} vs {want}");
        }
    }

    #[test]
    fn fractional_levy_exponent_is_two_over_beta() {
        let law = StepLaw::Levy(LevyParams::new(1.5, 1.0, 0.0).unwrap());
        let times: Vec<usize> = vec![10, 20, 50, 100, 200, 500];
        let st =
            ensemble_fractional_msd(&WalkSpec::new(1, 500, law), 4000, 12, &times, 0.5).unwrap();
        let e = st.fitted_exponent.unwrap();
        assert!((e - 2.0 / 1.5).abs() < 0.07, "{e}");
    }

    #[test]
    fn step_size_values() {
        assert_eq!(default_step_size(1.0, 1, 100).unwrap(), 0.01);
        assert_eq!(default_step_size(1.0, 10, 1000).unwrap(), 0.001);
        assert_eq!(default_step_size(5.0, 1, 100).unwrap(), 0.05);
        assert!(recommended_step_size(0.0, 1, 100, 1.0, 0.1).is_err());
        assert!(recommended_step_size(1.0, 0, 100, 1.0, 0.1).is_err());
        assert!(recommended_step_size(1.0, 1, 100, -1.0, 0.1).is_err());
    }

    proptest! {
        #[test]
        fn step_size_monotone(l in 0.01f64..100.0, d in 1usize..50, t in 1u64..10_000) {
            let s = default_step_size(l, d, t).unwrap();
            prop_assert!(default_step_size(l, d + 1, t).unwrap() < s);
            prop_assert!(default_step_size(l, d, t + 1).unwrap() < s);
            prop_assert!(default_step_size(l * 1.5, d, t).unwrap() > s);
        }
    }
}
