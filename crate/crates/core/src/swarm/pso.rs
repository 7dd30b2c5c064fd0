use serde::{Deserialize, Serialize};

use super::SwarmState;
use crate::objectives::Objective;
use crate::{Error, Result};

/// Standard PSO parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoConfig {
    /// Attraction toward the global best.
    pub alpha: f64,
    /// Attraction toward the personal best.
    pub beta: f64,
    /// Constant inertia weight; `None` keeps the full previous velocity.
    pub inertia: Option<f64>,
    /// Velocity clamp. Defaults to `+-0.5 * (upper - lower)` per coordinate.
    pub v_min: Option<Vec<f64>>,
    pub v_max: Option<Vec<f64>>,
    pub population: usize,
    pub max_iters: u64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            beta: 2.0,
            inertia: None,
            v_min: None,
            v_max: None,
            population: 20,
            max_iters: 1000,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite()
            && self.beta.is_finite()
            && self.alpha >= 0.0
            && self.beta >= 0.0)
        {
            return Err(Error::config(
                "alpha/beta",
                "learning parameters must be >= 0",
            ));
        }
        if let Some(t) = self.inertia {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::config(
                    "inertia",
                    format!("must lie in [0, 1], got {t}"),
                ));
            }
        }
        if self.population == 0 {
            return Err(Error::config("population", "must be >= 1"));
        }
        Ok(())
    }

    fn velocity_bounds(&self, obj: &Objective) -> Result<(Vec<f64>, Vec<f64>)> {
        let d = obj.dim();
        let half: Vec<f64> = (0..d).map(|k| 0.5 * obj.width(k)).collect();
        let vmax = self.v_max.clone().unwrap_or_else(|| half.clone());
        let vmin = self
            .v_min
            .clone()
            .unwrap_or_else(|| half.iter().map(|h| -h).collect());
        if vmin.len() != d || vmax.len() != d {
            return Err(Error::config(
                "v_min/v_max",
                format!("must have {d} entries"),
            ));
        }
        if vmin
            .iter()
            .zip(&vmax)
            .any(|(a, b)| !(a.is_finite() && b.is_finite() && a <= b))
        {
            return Err(Error::config("v_min/v_max", "v_min must not exceed v_max"));
        }
        Ok((vmin, vmax))
    }
}

/// One coordinate of the velocity update
/// `theta v + alpha e1 (g - x) + beta e2 (p - x)`.
#[allow(clippy::too_many_arguments)]
pub fn pso_velocity(
    theta: f64,
    alpha: f64,
    beta: f64,
    v: f64,
    x: f64,
    g: f64,
    p: f64,
    e1: f64,
    e2: f64,
) -> f64 {
    theta * v + alpha * e1 * (g - x) + beta * e2 * (p - x)
}

/// One PSO iteration: fresh uniform `e1, e2` per coordinate, velocity clamp,
/// `x <- x + v`, then personal and global best refresh.
pub fn pso_step(state: &mut SwarmState, cfg: &PsoConfig, obj: &mut Objective) -> Result<()> {
    cfg.validate()?;
    state.check_dims(obj)?;
    let n = state.population();
    if state.personal_bests.len() != n || state.velocities.len() != n {
        return Err(Error::domain(
            "PSO state needs velocities and personal bests for every particle",
        ));
    }
    let (vmin, vmax) = cfg.velocity_bounds(obj)?;
    let theta = cfg.inertia.unwrap_or(1.0);
    for i in 0..n {
        let g = state.global_best.clone();
        for k in 0..obj.dim() {
            let e1 = state.rng.next_f64();
            let e2 = state.rng.next_f64();
            let x = state.positions[i][k];
            let v = pso_velocity(
                theta,
                cfg.alpha,
                cfg.beta,
                state.velocities[i][k],
                x,
                g[k],
                state.personal_bests[i][k],
                e1,
                e2,
            )
            .clamp(vmin[k], vmax[k]);
            state.velocities[i][k] = v;
            state.positions[i][k] = (x + v).clamp(obj.lower()[k], obj.upper()[k]);
        }
        let f = obj.evaluate(&state.positions[i])?;
        state.values[i] = f;
        if f < state.personal_best_values[i] {
            state.personal_best_values[i] = f;
            state.personal_bests[i].clone_from(&state.positions[i]);
        }
        state.offer(i);
    }
    state.iteration += 1;
    Ok(())
}
