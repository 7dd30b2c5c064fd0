use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const BIFURCATION_BURN_IN: usize = 1000;
pub const BIFURCATION_RECORD: usize = 200;
pub const BIFURCATION_GRID: usize = 400;
/// Absolute tolerance below which two attractor states count as one.
pub const DISTINCT_TOL: f64 = 1e-6;
/// Orbits with `|u|` above this are flagged as divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaForm {
    /// `u (1 - beta0 exp(-u^2))`
    Exact,
    /// `u (1 - beta0 (1 - u^2))`
    Cubic,
}

pub fn fa_map_step(u: f64, beta0: f64, form: FaForm) -> f64 {
    match form {
        FaForm::Exact => u * (1.0 - beta0 * (-u * u).exp()),
        FaForm::Cubic => u * (1.0 - beta0 * (1.0 - u * u)),
    }
}

pub fn fa_map_derivative(u: f64, beta0: f64, form: FaForm) -> f64 {
    match form {
        FaForm::Exact => 1.0 - beta0 * (-u * u).exp() * (1.0 - 2.0 * u * u),
        FaForm::Cubic => 1.0 - beta0 + 3.0 * beta0 * u * u,
    }
}

/// The exact map before rescaling: `y (1 - beta0 exp(-gamma y^2))`.
///
/// With `u = sqrt(gamma) y` this is [`fa_map_step`] in `u`.
pub fn fa_map_step_scaled(y: f64, beta0: f64, gamma: f64) -> f64 {
    y * (1.0 - beta0 * (-gamma * y * y).exp())
}

/// A one-parameter map of the line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    FaExact,
    FaCubic,
    /// `lambda u (1 - u)`
    Logistic,
}

impl MapKind {
    pub fn step(self, u: f64, p: f64) -> f64 {
        match self {
            MapKind::FaExact => fa_map_step(u, p, FaForm::Exact),
            MapKind::FaCubic => fa_map_step(u, p, FaForm::Cubic),
            MapKind::Logistic => p * u * (1.0 - u),
        }
    }

    pub fn derivative(self, u: f64, p: f64) -> f64 {
        match self {
            MapKind::FaExact => fa_map_derivative(u, p, FaForm::Exact),
            MapKind::FaCubic => fa_map_derivative(u, p, FaForm::Cubic),
            MapKind::Logistic => p * (1.0 - 2.0 * u),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::FaExact => "fa",
            MapKind::FaCubic => "fa-cubic",
            MapKind::Logistic => "logistic",
        }
    }
}

impl FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fa" | "fa_exact" | "fa-exact" => Ok(MapKind::FaExact),
            "fa-cubic" | "fa_cubic" => Ok(MapKind::FaCubic),
            "logistic" => Ok(MapKind::Logistic),
            other => Err(Error::config(
                "map",
                format!("unknown map `{other}` (fa, fa-cubic, logistic)"),
            )),
        }
    }
}

fn escaped(u: f64) -> bool {
    !u.is_finite() || u.abs() > DIVERGENCE_LIMIT
}

/// `u_0 ..= u_n`, or `None` if the orbit escapes.
pub fn iterate_orbit(map: MapKind, p: f64, u0: f64, n: usize) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut u = u0;
    out.push(u);
    for _ in 0..n {
        u = map.step(u, p);
        if escaped(u) {
            return None;
        }
        out.push(u);
    }
    Some(out)
}

/// First `t <= max_iter` with `|u_t| < tol`.
pub fn first_passage(map: MapKind, p: f64, u0: f64, tol: f64, max_iter: usize) -> Option<usize> {
    let mut u = u0;
    for t in 0..=max_iter {
        if u.abs() < tol {
            return Some(t);
        }
        u = map.step(u, p);
        if escaped(u) {
            return None;
        }
    }
    None
}

/// Long-run states of one parameter value; empty when `diverged`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BifurcationColumn {
    pub param: f64,
    pub states: Vec<f64>,
    pub diverged: bool,
}

/// Iterates `map` at `steps` evenly spaced parameters in `[from, to]`,
/// discards `burn_in` states and records the next `record`.
pub fn bifurcation_scan(
    map: MapKind,
    from: f64,
    to: f64,
    steps: usize,
    u0: f64,
    burn_in: usize,
    record: usize,
) -> Result<Vec<BifurcationColumn>> {
    if steps < 2 {
        return Err(Error::config(
            "grid",
            format!("need at least 2 parameter values, got {steps}"),
        ));
    }
    if burn_in < 1 || record < 1 {
        return Err(Error::config("burn_in/record", "both must be >= 1"));
    }
    if !(from.is_finite() && to.is_finite() && u0.is_finite()) {
        return Err(Error::domain("parameter range and u0 must be finite"));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .into_par_iter()
        .map(|i| {
            let param = from + (to - from) * (i as f64 / last);
            let mut u = u0;
            let mut states = Vec::with_capacity(record);
            for t in 0..burn_in + record {
                u = map.step(u, param);
                if escaped(u) {
                    return BifurcationColumn {
                        param,
                        states: Vec::new(),
                        diverged: true,
                    };
                }
                if t >= burn_in {
                    states.push(u);
                }
            }
            BifurcationColumn {
                param,
                states,
                diverged: false,
            }
        })
        .collect())
}

/// Mean of `ln |f'(u_t)|` over `iterations` steps after
/// [`BIFURCATION_BURN_IN`] discarded ones.
///
/// Terms with `f'(u_t) = 0` are skipped. If every term is skipped the orbit
/// sits on a superstable point and `-inf` is returned.
pub fn lyapunov_estimate(map: MapKind, p: f64, u0: f64, iterations: usize) -> Result<f64> {
    if iterations < 1000 {
        return Err(Error::config(
            "iterations",
            format!("need at least 1000, got {iterations}"),
        ));
    }
    let mut u = u0;
    for _ in 0..BIFURCATION_BURN_IN {
        u = map.step(u, p);
    }
    let mut sum = 0.0;
    let mut used = 0usize;
    for _ in 0..iterations {
        if escaped(u) {
            return Err(Error::Numerical(format!(
                "orbit of {} at {p} diverged",
                map.as_str()
            )));
        }
        let d = map.derivative(u, p).abs();
        if d > 0.0 {
            sum += d.ln();
            used += 1;
        }
        u = map.step(u, p);
    }
    if used == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(sum / used as f64)
}

/// Number of clusters after merging sorted states closer than `tol`.
pub fn count_distinct(states: &[f64], tol: f64) -> usize {
    let s = crate::stats::sorted(states);
    if s.is_empty() {
        return 0;
    }
    1 + s.windows(2).filter(|w| w[1] - w[0] > tol).count()
}

/// Largest gap between consecutive sorted states.
pub fn max_gap(states: &[f64]) -> f64 {
    let s = crate::stats::sorted(states);
    s.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn origin_is_fixed() {
        for b in [0.0, 1.0, 4.2] {
            assert_eq!(fa_map_step(0.0, b, FaForm::Exact), 0.0);
            assert_eq!(fa_map_step(0.0, b, FaForm::Cubic), 0.0);
        }
    }

    #[test]
    fn hand_value() {
        let v = fa_map_step(0.5, 1.0, FaForm::Exact);
        assert!((v - 0.5 * (1.0 - (-0.25f64).exp())).abs() < 1e-15);
        assert!((v - 0.1106).abs() < 1e-4);
    }

    #[test]
    fn slope_at_origin() {
        for b in [0.3, 1.0, 1.9, 2.5] {
            assert_eq!(fa_map_derivative(0.0, b, FaForm::Exact), 1.0 - b);
            assert_eq!(fa_map_derivative(0.0, b, FaForm::Cubic), 1.0 - b);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for map in [MapKind::FaExact, MapKind::FaCubic, MapKind::Logistic] {
            for u in [-0.7, 0.1, 0.45, 1.3] {
                let fd = (map.step(u + h, 3.3) - map.step(u - h, 3.3)) / (2.0 * h);
                assert!((fd - map.derivative(u, 3.3)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn cubic_agrees_near_origin() {
        for i in 0..=100 {
            let u = -0.05 + 0.001 * i as f64;
            let d = (fa_map_step(u, 1.0, FaForm::Exact) - fa_map_step(u, 1.0, FaForm::Cubic)).abs();
            assert!(d <= 1e-4, "u {u}: {d}");
        }
    }

    #[test]
    fn gamma_is_a_scale() {
        for gamma in [0.25, 1.0, 3.0, 10.0] {
            let s = f64::sqrt(gamma);
            let mut y = 0.3 / s;
            let mut u = 0.3;
            for _ in 0..50 {
                y = fa_map_step_scaled(y, 3.7, gamma);
                u = fa_map_step(u, 3.7, FaForm::Exact);
                assert!((s * y - u).abs() <= 1e-12, "gamma {gamma}");
            }
        }
    }

    #[test]
    fn converges_below_two() {
        let cols = bifurcation_scan(MapKind::FaExact, 1.5, 1.5 + 1e-9, 2, 0.3, 1000, 200).unwrap();
        assert!(cols[0].states.iter().all(|u| u.abs() < 1e-6));
    }

    #[test]
    fn chaotic_band_at_4_2() {
        let cols = bifurcation_scan(MapKind::FaExact, 4.2, 4.3, 2, 0.3, 1000, 200).unwrap();
        let s = &cols[0].states;
        assert!(count_distinct(s, DISTINCT_TOL) >= 50);
        let span =
            s.iter().copied().fold(f64::MIN, f64::max) - s.iter().copied().fold(f64::MAX, f64::min);
        assert!(max_gap(s) < span / 10.0);
    }

    #[test]
    fn logistic_period_two() {
        let cols = bifurcation_scan(MapKind::Logistic, 3.2, 3.3, 2, 0.3, 1000, 200).unwrap();
        assert_eq!(count_distinct(&cols[0].states, DISTINCT_TOL), 2);
        // roots of lambda^2 u^2 - lambda (lambda + 1) u + (lambda + 1) = 0
        let l: f64 = 3.2;
        let disc = ((l + 1.0) * (l - 3.0)).sqrt();
        let lo = (l + 1.0 - disc) / (2.0 * l);
        let hi = (l + 1.0 + disc) / (2.0 * l);
        for &u in &cols[0].states {
            assert!((u - lo).abs() < 1e-9 || (u - hi).abs() < 1e-9);
        }
    }

    #[test]
    fn grid_endpoints_and_order() {
        let cols = bifurcation_scan(MapKind::FaExact, 0.5, 4.5, 5, 0.3, 10, 3).unwrap();
        let params: Vec<f64> = cols.iter().map(|c| c.param).collect();
        assert_eq!(params, vec![0.5, 1.5, 2.5, 3.5, 4.5]);
        assert!(cols.iter().all(|c| c.states.len() == 3));
    }

    #[test]
    fn cubic_escape_is_flagged() {
        let cols = bifurcation_scan(MapKind::FaCubic, 1.0, 1.1, 2, 5.0, 10, 5).unwrap();
        assert!(cols.iter().all(|c| c.diverged && c.states.is_empty()));
        assert!(lyapunov_estimate(MapKind::FaCubic, 1.0, 5.0, 1000).is_err());
    }

    #[test]
    fn scan_rejects_bad_arguments() {
        assert!(bifurcation_scan(MapKind::FaExact, 0.5, 4.5, 1, 0.3, 10, 3).is_err());
        assert!(bifurcation_scan(MapKind::FaExact, 0.5, 4.5, 4, 0.3, 0, 3).is_err());
        assert!(bifurcation_scan(MapKind::FaExact, 0.5, 4.5, 4, 0.3, 10, 0).is_err());
    }

    #[test]
    fn logistic_lyapunov_is_ln_two() {
        let l = lyapunov_estimate(MapKind::Logistic, 4.0, 0.3, 200_000).unwrap();
        assert!((l - std::f64::consts::LN_2).abs() < 0.02, "{l}");
    }

    #[test]
    fn fa_lyapunov_signs() {
        assert!(lyapunov_estimate(MapKind::FaExact, 1.0, 0.3, 10_000).unwrap() <= -1.0);
        assert!(lyapunov_estimate(MapKind::FaExact, 1.5, 0.3, 10_000).unwrap() < 0.0);
        assert!(lyapunov_estimate(MapKind::FaExact, 3.0, 0.3, 100_000).unwrap() <= 0.0);
        assert!(lyapunov_estimate(MapKind::FaExact, 4.2, 0.3, 100_000).unwrap() > 0.0);
        assert!(lyapunov_estimate(MapKind::FaExact, 4.2, 0.3, 999).is_err());
    }

    #[test]
    fn first_passage_below_and_above_two() {
        for b in [0.5, 1.0, 1.5, 1.9] {
            assert!(
                first_passage(MapKind::FaExact, b, 0.3, 1e-6, 10_000).is_some(),
                "beta0 {b}"
            );
        }
        for b in [2.5, 3.5] {
            assert!(
                first_passage(MapKind::FaExact, b, 0.3, 1e-6, 10_000).is_none(),
                "beta0 {b}"
            );
        }
    }

    #[test]
    fn map_names_parse() {
        for m in [MapKind::FaExact, MapKind::FaCubic, MapKind::Logistic] {
            assert_eq!(m.as_str().parse::<MapKind>().unwrap(), m);
        }
        assert!("tent".parse::<MapKind>().is_err());
    }

    #[test]
    fn distinct_counting() {
        assert_eq!(count_distinct(&[], 1e-6), 0);
        assert_eq!(count_distinct(&[1.0, 1.0 + 1e-9, 2.0, 3.0], 1e-6), 3);
        assert_eq!(max_gap(&[3.0, 1.0, 1.5]), 1.5);
    }

    proptest! {
        #[test]
        fn exact_form_never_escapes(u0 in -50.0f64..50.0, b in 0.0f64..4.5) {
            let orbit = iterate_orbit(MapKind::FaExact, b, u0, 500);
            prop_assert!(orbit.is_some());
        }
    }
}
