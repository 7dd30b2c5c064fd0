//! Swarm metaheuristics and the randomization machinery behind them.
//!
//! * [`stochastic`]: seeded streams plus uniform, Gaussian, Cauchy, Mantegna
//!   Levy-stable and logistic-map sampling.
//! * [`walks`]: Brownian and Levy random walks, mean-squared displacement and
//!   the step-size heuristic `s = sqrt(tau) * r / sqrt(t * d)`.
//! * [`objectives`]: bounded, evaluation-counting objective functions and the
//!   benchmark suite (sphere, Rosenbrock, Ackley, Rastrigin).
//! * [`swarm`]: particle swarm optimization, accelerated PSO and the firefly
//!   algorithm, plus a seeded trial runner.
//! * [`dynamics`]: eigenvalue regimes of the single-particle PSO system and
//!   bifurcation / Lyapunov analysis of one-dimensional maps.
//! * [`harness`]: multi-trial experiments and CSV emission used by the CLI.

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod objectives;
pub mod stats;
pub mod stochastic;
pub mod swarm;
pub mod walks;

pub use error::{Error, Result};
