use crate::objectives::Objective;
use crate::stochastic::RngStream;
use crate::{Error, Result};

/// Population state of one optimizer run.
///
/// `velocities` is all zeros for the firefly algorithm and `personal_bests`
/// is empty unless the standard PSO tracks them.
#[derive(Clone, Debug)]
pub struct SwarmState {
    pub positions: Vec<Vec<f64>>,
    /// Objective value at each current position.
    pub values: Vec<f64>,
    pub velocities: Vec<Vec<f64>>,
    pub personal_bests: Vec<Vec<f64>>,
    pub personal_best_values: Vec<f64>,
    pub global_best: Vec<f64>,
    pub global_best_value: f64,
    /// Completed iterations.
    pub iteration: u64,
    pub rng: RngStream,
}

impl SwarmState {
    /// Samples `population` points uniformly over the box, zero velocities,
    /// and evaluates each one.
    pub fn initialize(
        obj: &mut Objective,
        population: usize,
        mut rng: RngStream,
        track_personal: bool,
    ) -> Result<Self> {
        if population == 0 {
            return Err(Error::config("population", "must be >= 1"));
        }
        let positions: Vec<Vec<f64>> = (0..population)
            .map(|_| {
                (0..obj.dim())
                    .map(|k| obj.lower()[k] + obj.width(k) * rng.next_f64())
                    .collect()
            })
            .collect();
        Self::from_positions(obj, positions, rng, track_personal)
    }

    /// Builds a state around given positions, evaluating each.
    pub fn from_positions(
        obj: &mut Objective,
        positions: Vec<Vec<f64>>,
        rng: RngStream,
        track_personal: bool,
    ) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::config("population", "must be >= 1"));
        }
        let mut values = Vec::with_capacity(positions.len());
        for p in &positions {
            values.push(obj.evaluate(p)?);
        }
        let dim = obj.dim();
        let mut state = Self {
            velocities: vec![vec![0.0; dim]; positions.len()],
            personal_bests: if track_personal {
                positions.clone()
            } else {
                Vec::new()
            },
            personal_best_values: if track_personal {
                values.clone()
            } else {
                Vec::new()
            },
            global_best: positions[0].clone(),
            global_best_value: values[0],
            positions,
            values,
            iteration: 0,
            rng,
        };
        for i in 1..state.positions.len() {
            state.offer(i);
        }
        Ok(state)
    }

    pub fn population(&self) -> usize {
        self.positions.len()
    }

    /// Replaces the global best with particle `i` if it is strictly better.
    pub(crate) fn offer(&mut self, i: usize) {
        if self.values[i] < self.global_best_value || self.global_best_value.is_nan() {
            self.global_best_value = self.values[i];
            self.global_best.clone_from(&self.positions[i]);
        }
    }

    pub(crate) fn check_dims(&self, obj: &Objective) -> Result<()> {
        let d = obj.dim();
        let bad = self
            .positions
            .iter()
            .chain(std::iter::once(&self.global_best))
            .any(|p| p.len() != d)
            || self.values.len() != self.positions.len();
        if bad {
            return Err(Error::domain(format!(
                "swarm state does not match objective dimension {d}"
            )));
        }
        Ok(())
    }
}
