use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::special::gamma;
use super::{standard_normal, RngStream};
use crate::{Error, Result};

/// `sigma_u` of Mantegna's algorithm (with `sigma_v = 1`):
///
/// ```text
/// sigma_u = { Gamma(1+b) sin(pi b / 2) / (Gamma((1+b)/2) b 2^((b-1)/2)) }^(1/b)
/// ```
///
/// `beta = 2` is rejected (the sine vanishes); Gaussian steps cover that case.
pub fn mantegna_sigma_u(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 2.0) {
        let hint = if beta == 2.0 {
            "; use gaussian steps for beta = 2"
        } else {
            ""
        };
        return Err(Error::domain(format!(
            "levy index beta must lie in (0, 2), got {beta}{hint}"
        )));
    }
    let num = gamma(1.0 + beta) * (PI * beta / 2.0).sin();
    let den = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    Ok((num / den).powf(1.0 / beta))
}

/// `u / |v|^(1/beta)`.
pub fn mantegna_transform(u: f64, v: f64, beta: f64) -> f64 {
    u / v.abs().powf(1.0 / beta)
}

/// Large-step asymptote of the symmetric stable density:
/// `L(s) ~ C / |s|^(1+beta)` with `C = alpha beta Gamma(beta) sin(pi beta / 2) / pi`.
pub fn levy_tail_coefficient(alpha: f64, beta: f64) -> f64 {
    alpha * beta * gamma(beta) * (PI * beta / 2.0).sin() / PI
}

/// Parameters of a symmetric Levy-stable step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLevyParams", into = "RawLevyParams")]
pub struct LevyParams {
    beta: f64,
    scale: f64,
    min_step: f64,
    sigma_u: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
struct RawLevyParams {
    beta: f64,
    #[serde(default = "one")]
    scale: f64,
    #[serde(default)]
    min_step: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawLevyParams> for LevyParams {
    type Error = Error;

    fn try_from(raw: RawLevyParams) -> Result<Self> {
        LevyParams::new(raw.beta, raw.scale, raw.min_step)
    }
}

impl From<LevyParams> for RawLevyParams {
    fn from(p: LevyParams) -> Self {
        RawLevyParams {
            beta: p.beta,
            scale: p.scale,
            min_step: p.min_step,
        }
    }
}

impl LevyParams {
    /// `0 < beta < 2`, `scale > 0`, `min_step >= 0`.
    pub fn new(beta: f64, scale: f64, min_step: f64) -> Result<Self> {
        let sigma_u = mantegna_sigma_u(beta)?;
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::domain(format!(
                "levy scale must be > 0, got {scale}"
            )));
        }
        if !(min_step.is_finite() && min_step >= 0.0) {
            return Err(Error::domain(format!(
                "levy min_step must be >= 0, got {min_step}"
            )));
        }
        Ok(Self {
            beta,
            scale,
            min_step,
            sigma_u,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn min_step(&self) -> f64 {
        self.min_step
    }

    pub fn sigma_u(&self) -> f64 {
        self.sigma_u
    }
}

/// Signed Levy step `scale * u / |v|^(1/beta)` via Mantegna's algorithm.
///
/// Steps shorter than `min_step` are redrawn rather than clamped, so the
/// conditional law above `min_step` keeps its power-law tail.
pub fn sample_levy_step(rng: &mut RngStream, p: &LevyParams) -> f64 {
    loop {
        let u = p.sigma_u * standard_normal(rng);
        let v = standard_normal(rng);
        if v == 0.0 {
            continue;
        }
        let s = p.scale * mantegna_transform(u, v, p.beta);
        if s.abs() >= p.min_step {
            return s;
        }
    }
}
