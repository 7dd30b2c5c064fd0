//! Convergence and chaos analysis.
//!
//! The single-particle PSO system `Y_{t+1} = A Y_t` with
//! `A = [[1, gamma], [-1, 1 - gamma]]` has `det A = 1`, so its eigenvalues
//! lie on the unit circle for `0 < gamma < 4` and split into a real pair with
//! one root outside it for `gamma > 4`. The firefly update collapses to the
//! one-dimensional map `u -> u (1 - beta0 exp(-u^2))`, whose origin is stable
//! exactly when `0 < beta0 < 2`.

mod maps;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use maps::{
    bifurcation_scan, count_distinct, fa_map_derivative, fa_map_step, fa_map_step_scaled,
    first_passage, iterate_orbit, lyapunov_estimate, max_gap, BifurcationColumn, FaForm, MapKind,
    BIFURCATION_BURN_IN, BIFURCATION_GRID, BIFURCATION_RECORD, DISTINCT_TOL, DIVERGENCE_LIMIT,
};

/// Steps used to check a regime classification against the iterated system.
pub const REGIME_CHECK_STEPS: usize = 1000;

/// The linear system followed by one particle when `alpha + beta = gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsoLinearSystem {
    gamma: f64,
}

impl PsoLinearSystem {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::domain(format!(
                "gamma must be finite and > 0, got {gamma}"
            )));
        }
        Ok(PsoLinearSystem { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[1.0, self.gamma], [-1.0, 1.0 - self.gamma]]
    }

    pub fn determinant(&self) -> f64 {
        let a = self.matrix();
        a[0][0] * a[1][1] - a[0][1] * a[1][0]
    }

    /// `Y = (v, u)` to `A Y`.
    pub fn step(&self, y: [f64; 2]) -> [f64; 2] {
        let a = self.matrix();
        [
            a[0][0] * y[0] + a[0][1] * y[1],
            a[1][0] * y[0] + a[1][1] * y[1],
        ]
    }

    /// States `Y_0 ..= Y_steps`, cut short once the norm passes `limit`.
    pub fn trajectory(&self, y0: [f64; 2], steps: usize, limit: f64) -> Vec<[f64; 2]> {
        let mut out = Vec::with_capacity(steps + 1);
        let mut y = y0;
        out.push(y);
        for _ in 0..steps {
            y = self.step(y);
            out.push(y);
            if norm(y) > limit {
                break;
            }
        }
        out
    }
}

fn norm(y: [f64; 2]) -> f64 {
    y[0].hypot(y[1])
}

/// Both roots of `lambda^2 - (2 - gamma) lambda + 1 = 0`.
///
/// Real roots are returned larger-modulus first; complex roots with positive
/// imaginary part first.
pub fn pso_eigenvalues(gamma: f64) -> Result<(Complex64, Complex64)> {
    PsoLinearSystem::new(gamma)?;
    let half_trace = 1.0 - gamma / 2.0;
    let disc = gamma * gamma - 4.0 * gamma;
    if disc < 0.0 {
        let im = (-disc).sqrt() / 2.0;
        Ok((
            Complex64::new(half_trace, im),
            Complex64::new(half_trace, -im),
        ))
    } else {
        // both roots share the sign of half_trace, which is <= -1 here
        let big = half_trace - disc.sqrt() / 2.0;
        Ok((Complex64::new(big, 0.0), Complex64::new(1.0 / big, 0.0)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Complex conjugate pair on the unit circle: `0 < gamma < 4`.
    Cyclic,
    /// Double root at -1: `gamma = 4`.
    Boundary,
    /// Real pair with one root outside the unit circle: `gamma > 4`.
    Divergent,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Cyclic => "cyclic",
            Regime::Boundary => "boundary",
            Regime::Divergent => "divergent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub gamma: f64,
    pub eigenvalues: (Complex64, Complex64),
    pub classification: Regime,
    /// Only set for one-dimensional maps.
    pub lyapunov: Option<f64>,
    /// The last 50 states of the check trajectory from `Y_0 = (0, 1)`.
    pub attractor_points: Vec<[f64; 2]>,
    /// Largest state norm seen along the check trajectory.
    pub max_norm: f64,
    /// First step after which the norm increases strictly to the end.
    pub monotone_from: Option<usize>,
    /// Whether the trajectory behaves as the classification predicts.
    pub verified: bool,
}

/// Classifies the regime from the eigenvalues and checks it by iterating
/// from `Y_0 = (0, 1)` for [`REGIME_CHECK_STEPS`] steps.
///
/// A cyclic orbit must stay within `10 max(1, gamma)`. A divergent orbit
/// must grow monotonically from step 10 on and pass `1e6`; it is stopped
/// at `1e12`.
pub fn classify_pso_regime(gamma: f64) -> Result<RegimeReport> {
    let system = PsoLinearSystem::new(gamma)?;
    let eigenvalues = pso_eigenvalues(gamma)?;
    let classification = if gamma < 4.0 {
        Regime::Cyclic
    } else if gamma == 4.0 {
        Regime::Boundary
    } else {
        Regime::Divergent
    };
    let traj = system.trajectory([0.0, 1.0], REGIME_CHECK_STEPS, 1e12);
    let norms: Vec<f64> = traj.iter().map(|&y| norm(y)).collect();
    let max_norm = norms.iter().copied().fold(0.0, f64::max);
    let mut monotone_from = Some(norms.len() - 1);
    for t in (1..norms.len()).rev() {
        if norms[t] > norms[t - 1] {
            monotone_from = Some(t - 1);
        } else {
            break;
        }
    }
    if monotone_from == Some(norms.len() - 1) {
        monotone_from = None;
    }
    let verified = match classification {
        Regime::Cyclic => max_norm <= 10.0 * gamma.max(1.0),
        Regime::Boundary => eigenvalues.0 == eigenvalues.1,
        Regime::Divergent => monotone_from.is_some_and(|t| t <= 10) && max_norm > 1e6,
    };
    let keep = traj.len().min(50);
    Ok(RegimeReport {
        gamma,
        eigenvalues,
        classification,
        lyapunov: None,
        attractor_points: traj[traj.len() - keep..].to_vec(),
        max_norm,
        monotone_from,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn double_root_at_four() {
        let (a, b) = pso_eigenvalues(4.0).unwrap();
        assert_eq!(a, Complex64::new(-1.0, 0.0));
        assert_eq!(b, Complex64::new(-1.0, 0.0));
        let r = classify_pso_regime(4.0).unwrap();
        assert_eq!(r.classification, Regime::Boundary);
        assert!(r.verified);
    }

    #[test]
    fn gamma_two_gives_plus_minus_i() {
        let (a, b) = pso_eigenvalues(2.0).unwrap();
        assert_eq!(a, Complex64::new(0.0, 1.0));
        assert_eq!(b, Complex64::new(0.0, -1.0));
    }

    #[test]
    fn gamma_five_real_pair() {
        let (a, b) = pso_eigenvalues(5.0).unwrap();
        let s5 = 5f64.sqrt();
        assert!((a.re - (-1.5 - s5 / 2.0)).abs() < 1e-14);
        assert!((b.re - (-1.5 + s5 / 2.0)).abs() < 1e-14);
        assert_eq!(a.im, 0.0);
        assert!((a.re + 2.618).abs() < 1e-3 && (b.re + 0.382).abs() < 1e-3);
    }

    #[test]
    fn regimes() {
        for g in [0.5, 1.0, 2.0, 3.0, 3.9] {
            let r = classify_pso_regime(g).unwrap();
            assert_eq!(r.classification, Regime::Cyclic, "gamma {g}");
            assert!(r.verified, "gamma {g}: max norm {}", r.max_norm);
            assert!((r.eigenvalues.0.norm() - 1.0).abs() < 1e-12);
        }
        for g in [4.1, 5.0, 6.0] {
            let r = classify_pso_regime(g).unwrap();
            assert_eq!(r.classification, Regime::Divergent);
            assert!(r.verified, "gamma {g}: {:?}", r.monotone_from);
            assert!(r.eigenvalues.0.norm() > 1.0);
        }
    }

    #[test]
    fn determinant_is_one() {
        for g in [0.1, 1.0, 4.0, 7.5] {
            assert_eq!(PsoLinearSystem::new(g).unwrap().determinant(), 1.0);
        }
    }

    #[test]
    fn rejects_nonpositive_gamma() {
        assert!(pso_eigenvalues(0.0).is_err());
        assert!(classify_pso_regime(-1.0).is_err());
        assert!(pso_eigenvalues(f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn eigenvalue_product_is_one(g in 1e-3f64..1e3) {
            let (a, b) = pso_eigenvalues(g).unwrap();
            let p = a * b;
            prop_assert!((p.re - 1.0).abs() < 1e-12 && p.im.abs() < 1e-12);
            let sum = a + b;
            prop_assert!((sum.re - (2.0 - g)).abs() < 1e-12 * g.max(1.0));
        }
    }
}
