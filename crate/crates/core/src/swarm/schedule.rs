use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Decay of a randomization amplitude over iterations `t = 0, 1, ...`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[derive(Default)]
pub enum Schedule {
    #[default]
    Constant,
    /// `a0 * exp(-rate * t)`
    Exponential { rate: f64 },
    /// `a0 * ratio^t`, `0 < ratio < 1`
    Geometric { ratio: f64 },
}

impl Schedule {
    /// Multiplier applied to the initial value at iteration `t`.
    pub fn factor(&self, t: u64) -> f64 {
        match *self {
            Schedule::Constant => 1.0,
            Schedule::Exponential { rate } => (-rate * t as f64).exp(),
            Schedule::Geometric { ratio } => ratio.powf(t as f64),
        }
    }

    pub fn value(&self, initial: f64, t: u64) -> f64 {
        initial * self.factor(t)
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        match *self {
            Schedule::Constant => Ok(()),
            Schedule::Exponential { rate } if rate > 0.0 && rate.is_finite() => Ok(()),
            Schedule::Geometric { ratio } if ratio > 0.0 && ratio < 1.0 => Ok(()),
            Schedule::Exponential { rate } => Err(Error::config(
                field,
                format!("exponential rate must be > 0, got {rate}"),
            )),
            Schedule::Geometric { ratio } => Err(Error::config(
                field,
                format!("geometric ratio must lie in (0, 1), got {ratio}"),
            )),
        }
    }
}
