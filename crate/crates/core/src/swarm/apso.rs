use serde::{Deserialize, Serialize};

use super::{Schedule, SwarmState};
use crate::objectives::Objective;
use crate::stochastic::standard_normal;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApsoForm {
    /// `v <- v + alpha_t eps + beta (g - x)`, `x <- x + v`
    Velocity,
    /// `x <- (1 - beta) x + beta g + alpha_t eps`
    #[default]
    SingleStep,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApsoNoise {
    /// `eps - 1/2` with `eps ~ U(0, 1)`
    #[default]
    ShiftedUniform,
    /// `eps ~ N(0, 1)`
    Gaussian,
}

/// Accelerated PSO parameters: global best only, decaying randomness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApsoConfig {
    pub alpha0: f64,
    pub beta: f64,
    pub schedule: Schedule,
    pub form: ApsoForm,
    pub noise: ApsoNoise,
    pub population: usize,
    pub max_iters: u64,
}

impl Default for ApsoConfig {
    fn default() -> Self {
        Self {
            alpha0: 0.5,
            beta: 0.5,
            schedule: Schedule::Geometric { ratio: 0.97 },
            form: ApsoForm::SingleStep,
            noise: ApsoNoise::ShiftedUniform,
            population: 20,
            max_iters: 1000,
        }
    }
}

impl ApsoConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0.is_finite() && self.alpha0 > 0.0) {
            return Err(Error::config(
                "alpha0",
                format!("must be > 0, got {}", self.alpha0),
            ));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::config(
                "beta",
                format!("must lie in [0, 1], got {}", self.beta),
            ));
        }
        if self.population == 0 {
            return Err(Error::config("population", "must be >= 1"));
        }
        self.schedule.validate("schedule")
    }

    /// Randomization amplitude used during iteration `t` (0-based).
    pub fn alpha_at(&self, t: u64) -> f64 {
        self.schedule.value(self.alpha0, t)
    }
}

/// `(1 - beta) x + beta g + alpha eps` for one coordinate.
pub fn apso_single_step_update(x: f64, g: f64, beta: f64, alpha: f64, eps: f64) -> f64 {
    (1.0 - beta) * x + beta * g + alpha * eps
}

/// One accelerated-PSO iteration.
pub fn apso_step(state: &mut SwarmState, cfg: &ApsoConfig, obj: &mut Objective) -> Result<()> {
    cfg.validate()?;
    state.check_dims(obj)?;
    if cfg.form == ApsoForm::Velocity && state.velocities.len() != state.population() {
        return Err(Error::domain(
            "velocity-form APSO needs a velocity per particle",
        ));
    }
    let alpha = cfg.alpha_at(state.iteration);
    for i in 0..state.population() {
        let g = state.global_best.clone();
        for (k, &gk) in g.iter().enumerate() {
            let eps = match cfg.noise {
                ApsoNoise::ShiftedUniform => state.rng.next_f64() - 0.5,
                ApsoNoise::Gaussian => standard_normal(&mut state.rng),
            };
            let x = state.positions[i][k];
            let next = match cfg.form {
                ApsoForm::SingleStep => apso_single_step_update(x, gk, cfg.beta, alpha, eps),
                ApsoForm::Velocity => {
                    let v = state.velocities[i][k] + alpha * eps + cfg.beta * (gk - x);
                    state.velocities[i][k] = v;
                    x + v
                }
            };
            state.positions[i][k] = next.clamp(obj.lower()[k], obj.upper()[k]);
        }
        state.values[i] = obj.evaluate(&state.positions[i])?;
        state.offer(i);
    }
    state.iteration += 1;
    Ok(())
}
