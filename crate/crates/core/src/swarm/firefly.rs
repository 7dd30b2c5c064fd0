use serde::{Deserialize, Serialize};

use super::{Schedule, SwarmState};
use crate::objectives::Objective;
use crate::stochastic::{sample_levy_step, standard_normal, LevyParams};
use crate::walks::default_step_size;
use crate::{Error, Result};

/// Distribution of the firefly randomization vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FaNoise {
    Gaussian,
    /// `eps - 1/2` with `eps ~ U(0, 1)`
    #[default]
    Uniform,
    /// Independent Mantegna steps per coordinate.
    Levy(LevyParams),
}

/// Per-coordinate multiplier applied to `alpha * eps`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseScale {
    /// No rescaling.
    Absolute,
    /// `upper_k - lower_k`
    #[default]
    DomainWidth,
    /// Random-walk step size for a region of width `upper_k - lower_k`
    /// explored in `max_iters` iterations.
    RecommendedStep,
}

/// Which fireflies pull on firefly `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attraction {
    /// Every strictly brighter firefly, one move per brighter peer.
    #[default]
    Pairwise,
    /// Only the current global best, one move per iteration.
    GlobalBest,
}

/// When a pairwise-attracted firefly is re-evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Refresh {
    /// After every move toward a brighter peer.
    #[default]
    PerMove,
    /// Once, after all of its moves in the sweep.
    PerSweep,
}

/// Firefly algorithm parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FaConfig {
    /// Attractiveness at zero distance.
    pub beta0: f64,
    /// Light absorption coefficient; characteristic length `1 / sqrt(gamma)`.
    pub gamma: f64,
    /// Initial randomization weight.
    pub alpha: f64,
    pub alpha_schedule: Schedule,
    /// Optional decay of `beta0` over iterations.
    pub beta0_schedule: Schedule,
    pub noise: FaNoise,
    pub noise_scale: NoiseScale,
    pub attraction: Attraction,
    pub refresh: Refresh,
    pub population: usize,
    pub max_iters: u64,
}

impl Default for FaConfig {
    fn default() -> Self {
        Self {
            beta0: 1.0,
            gamma: 1.0,
            alpha: 0.2,
            alpha_schedule: Schedule::Geometric { ratio: 0.99 },
            beta0_schedule: Schedule::Constant,
            noise: FaNoise::Uniform,
            noise_scale: NoiseScale::DomainWidth,
            attraction: Attraction::Pairwise,
            refresh: Refresh::PerMove,
            population: 25,
            max_iters: 1000,
        }
    }
}

impl FaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::config(
                "gamma",
                format!("must be finite and >= 0, got {}", self.gamma),
            ));
        }
        if !(self.beta0.is_finite() && self.beta0 >= 0.0) {
            return Err(Error::config(
                "beta0",
                format!("must be >= 0, got {}", self.beta0),
            ));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::config(
                "alpha",
                format!("must be >= 0, got {}", self.alpha),
            ));
        }
        if self.population < 2 {
            return Err(Error::config(
                "population",
                "firefly attraction needs at least 2 fireflies",
            ));
        }
        self.alpha_schedule.validate("alpha_schedule")?;
        self.beta0_schedule.validate("beta0_schedule")
    }

    /// Randomization weight used during iteration `t` (0-based).
    pub fn alpha_at(&self, t: u64) -> f64 {
        self.alpha_schedule.value(self.alpha, t)
    }

    pub fn beta0_at(&self, t: u64) -> f64 {
        self.beta0_schedule.value(self.beta0, t)
    }

    fn noise_scales(&self, obj: &Objective) -> Result<Vec<f64>> {
        (0..obj.dim())
            .map(|k| match self.noise_scale {
                NoiseScale::Absolute => Ok(1.0),
                NoiseScale::DomainWidth => Ok(obj.width(k)),
                NoiseScale::RecommendedStep => {
                    default_step_size(obj.width(k), obj.dim(), self.max_iters.max(1))
                }
            })
            .collect()
    }
}

/// `beta0 * exp(-gamma r^2)`
pub fn attractiveness(beta0: f64, gamma: f64, r: f64) -> f64 {
    beta0 * (-gamma * r * r).exp()
}

/// Euclidean distance.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

struct Mover<'a> {
    cfg: &'a FaConfig,
    alpha: f64,
    beta0: f64,
    scales: Vec<f64>,
}

impl Mover<'_> {
    fn noise(&self, state: &mut SwarmState) -> f64 {
        match self.cfg.noise {
            FaNoise::Gaussian => standard_normal(&mut state.rng),
            FaNoise::Uniform => state.rng.next_f64() - 0.5,
            FaNoise::Levy(p) => sample_levy_step(&mut state.rng, &p),
        }
    }

    /// `x_i <- (1 - b) x_i + b x_j + alpha s_k eps_k`, `b = beta0 exp(-gamma r_ij^2)`.
    /// With `target = None` only the random term is applied.
    fn shift(&self, state: &mut SwarmState, i: usize, target: Option<&[f64]>, obj: &Objective) {
        let b = target.map(|t| {
            self.beta0 * (-self.cfg.gamma * squared_distance(&state.positions[i], t)).exp()
        });
        for k in 0..obj.dim() {
            let eps = self.noise(state);
            let x = state.positions[i][k];
            let kick = self.alpha * self.scales[k] * eps;
            let next = match (b, target) {
                (Some(b), Some(t)) => (1.0 - b) * x + b * t[k] + kick,
                _ => x + kick,
            };
            state.positions[i][k] = next.clamp(obj.lower()[k], obj.upper()[k]);
        }
    }

    fn settle(&self, state: &mut SwarmState, i: usize, obj: &mut Objective) -> Result<()> {
        state.values[i] = obj.evaluate(&state.positions[i])?;
        state.offer(i);
        Ok(())
    }
}

/// One firefly sweep.
///
/// Pairwise mode: for each `i` in index order and each `j != i`, if `j` is
/// strictly brighter than the current `i`, move `i` toward `j` and
/// re-evaluate it. With [`Refresh::PerSweep`] the comparisons use the value
/// from the start of `i`'s turn and `i` is evaluated once. A firefly that met no brighter peer takes a purely random
/// step. Global-best mode moves every firefly toward the current global best
/// once.
pub fn fa_step(state: &mut SwarmState, cfg: &FaConfig, obj: &mut Objective) -> Result<()> {
    cfg.validate()?;
    if state.population() < 2 {
        return Err(Error::config(
            "population",
            "firefly attraction needs at least 2 fireflies",
        ));
    }
    state.check_dims(obj)?;
    let t = state.iteration;
    let mover = Mover {
        cfg,
        alpha: cfg.alpha_at(t),
        beta0: cfg.beta0_at(t),
        scales: cfg.noise_scales(obj)?,
    };
    let n = state.population();
    for i in 0..n {
        match cfg.attraction {
            Attraction::GlobalBest => {
                let g = state.global_best.clone();
                mover.shift(state, i, Some(&g), obj);
                mover.settle(state, i, obj)?;
            }
            Attraction::Pairwise => {
                let mut moved = false;
                for j in 0..n {
                    if j != i && state.values[j] < state.values[i] {
                        let xj = state.positions[j].clone();
                        mover.shift(state, i, Some(&xj), obj);
                        if cfg.refresh == Refresh::PerMove {
                            mover.settle(state, i, obj)?;
                        }
                        moved = true;
                    }
                }
                if !moved {
                    mover.shift(state, i, None, obj);
                }
                if !moved || cfg.refresh == Refresh::PerSweep {
                    mover.settle(state, i, obj)?;
                }
            }
        }
    }
    state.iteration += 1;
    Ok(())
}
