//! Particle swarm optimization, accelerated PSO and the firefly algorithm.
//!
//! All three minimize an [`Objective`]. Each `*_step` function advances a
//! [`SwarmState`] by one iteration in place; [`run`] drives a whole seeded
//! trial and records its convergence trace.
//!
//! Shared conventions:
//! * particles are updated in index order and the global best is refreshed
//!   right after each evaluation;
//! * positions leaving the search box are clamped to it;
//! * brightness for the firefly algorithm is `-f(x)`, so "brighter" means a
//!   strictly lower objective value.

mod apso;
mod firefly;
mod pso;
mod runner;
mod schedule;
mod state;

pub use apso::{apso_single_step_update, apso_step, ApsoConfig, ApsoForm, ApsoNoise};
pub use firefly::{
    attractiveness, distance, fa_step, Attraction, FaConfig, FaNoise, NoiseScale, Refresh,
};
pub use pso::{pso_step, pso_velocity, PsoConfig};
pub use runner::{run, OptimizerConfig, Stop, TraceRow, TrialRecord};
pub use schedule::Schedule;
pub use state::SwarmState;
