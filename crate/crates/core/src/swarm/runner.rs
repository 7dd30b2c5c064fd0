use serde::{Deserialize, Serialize};

use super::{apso_step, fa_step, pso_step, ApsoConfig, FaConfig, PsoConfig, SwarmState};
use crate::objectives::Objective;
use crate::stochastic::RngStream;
use crate::{Error, Result};

/// One of the three optimizers with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "snake_case")]
pub enum OptimizerConfig {
    Pso(PsoConfig),
    Apso(ApsoConfig),
    Fa(FaConfig),
}

impl OptimizerConfig {
    pub fn name(&self) -> &'static str {
        match self {
            OptimizerConfig::Pso(_) => "pso",
            OptimizerConfig::Apso(_) => "apso",
            OptimizerConfig::Fa(_) => "fa",
        }
    }

    /// Default parameters for `pso`, `apso` or `fa`.
    pub fn default_for(name: &str) -> Result<Self> {
        match name {
            "pso" => Ok(OptimizerConfig::Pso(PsoConfig::default())),
            "apso" => Ok(OptimizerConfig::Apso(ApsoConfig::default())),
            "fa" => Ok(OptimizerConfig::Fa(FaConfig::default())),
            other => Err(Error::config(
                "algo",
                format!("unknown algorithm `{other}` (pso, apso, fa)"),
            )),
        }
    }

    pub fn population(&self) -> usize {
        match self {
            OptimizerConfig::Pso(c) => c.population,
            OptimizerConfig::Apso(c) => c.population,
            OptimizerConfig::Fa(c) => c.population,
        }
    }

    pub fn max_iters(&self) -> u64 {
        match self {
            OptimizerConfig::Pso(c) => c.max_iters,
            OptimizerConfig::Apso(c) => c.max_iters,
            OptimizerConfig::Fa(c) => c.max_iters,
        }
    }

    pub fn set_max_iters(&mut self, iters: u64) {
        match self {
            OptimizerConfig::Pso(c) => c.max_iters = iters,
            OptimizerConfig::Apso(c) => c.max_iters = iters,
            OptimizerConfig::Fa(c) => c.max_iters = iters,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OptimizerConfig::Pso(c) => c.validate(),
            OptimizerConfig::Apso(c) => c.validate(),
            OptimizerConfig::Fa(c) => c.validate(),
        }
    }

    /// Randomization amplitude applied during iteration `t`; `None` for PSO.
    pub fn alpha_at(&self, t: u64) -> Option<f64> {
        match self {
            OptimizerConfig::Pso(_) => None,
            OptimizerConfig::Apso(c) => Some(c.alpha_at(t)),
            OptimizerConfig::Fa(c) => Some(c.alpha_at(t)),
        }
    }

    fn step(&self, state: &mut SwarmState, obj: &mut Objective) -> Result<()> {
        match self {
            OptimizerConfig::Pso(c) => pso_step(state, c, obj),
            OptimizerConfig::Apso(c) => apso_step(state, c, obj),
            OptimizerConfig::Fa(c) => fa_step(state, c, obj),
        }
    }
}

/// Stop conditions in addition to the optimizer's `max_iters` guard.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stop {
    /// Stop once the best value is `<=` this.
    pub target_value: Option<f64>,
    /// Hard cap on objective evaluations, initialization included.
    pub max_evals: Option<u64>,
}

/// Best value after an iteration. Row 0 is the initial population.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: u64,
    pub best_value: f64,
    /// Randomization amplitude used during this iteration.
    pub alpha_t: Option<f64>,
}

/// Outcome of one seeded run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub best_value: f64,
    pub best_point: Vec<f64>,
    pub evaluations: u64,
    pub iterations: u64,
    pub trace: Vec<TraceRow>,
}

impl TrialRecord {
    pub fn reached(&self, target: f64) -> bool {
        self.best_value <= target
    }
}

/// Runs one trial from `seed`.
///
/// Initial positions are uniform over the box and initial velocities zero.
/// The objective is cloned with a fresh counter, so `obj` itself is not
/// modified. An iteration cut short by the evaluation budget still gets a
/// trace row.
pub fn run(cfg: &OptimizerConfig, obj: &Objective, seed: u64, stop: &Stop) -> Result<TrialRecord> {
    cfg.validate()?;
    let pop = cfg.population() as u64;
    if let Some(m) = stop.max_evals {
        if m < pop {
            return Err(Error::config(
                "max_evals",
                format!("budget {m} is smaller than the population {pop}"),
            ));
        }
    }
    let mut obj = obj.fresh().with_max_evals(stop.max_evals);
    let track_personal = matches!(cfg, OptimizerConfig::Pso(_));
    let mut state = SwarmState::initialize(
        &mut obj,
        cfg.population(),
        RngStream::new(seed),
        track_personal,
    )?;
    let mut trace = vec![TraceRow {
        iter: 0,
        best_value: state.global_best_value,
        alpha_t: None,
    }];
    let done = |state: &SwarmState, obj: &Objective| {
        stop.target_value
            .is_some_and(|t| state.global_best_value <= t)
            || obj.budget_left() == Some(0)
    };
    while state.iteration < cfg.max_iters() && !done(&state, &obj) {
        let t = state.iteration;
        let exhausted = match cfg.step(&mut state, &mut obj) {
            Ok(()) => false,
            Err(Error::BudgetExhausted(_)) => {
                state.iteration = t + 1;
                true
            }
            Err(e) => return Err(e),
        };
        trace.push(TraceRow {
            iter: state.iteration,
            best_value: state.global_best_value,
            alpha_t: cfg.alpha_at(t),
        });
        if exhausted {
            break;
        }
    }
    Ok(TrialRecord {
        trial: 0,
        seed,
        best_value: state.global_best_value,
        best_point: state.global_best,
        evaluations: obj.eval_count(),
        iterations: state.iteration,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::builtin;

    #[test]
    fn target_met_at_start_stops_at_zero() {
        let obj = Objective::boxed("flat", 2, -1.0, 1.0, |_| 3.0).unwrap();
        let stop = Stop {
            target_value: Some(3.0),
            max_evals: None,
        };
        for name in ["pso", "apso", "fa"] {
            let rec = run(&OptimizerConfig::default_for(name).unwrap(), &obj, 1, &stop).unwrap();
            assert_eq!(rec.iterations, 0);
            assert_eq!(rec.trace.len(), 1);
            assert_eq!(rec.best_value, 3.0);
        }
    }

    #[test]
    fn same_seed_same_record() {
        let obj = builtin("rastrigin", 3, None).unwrap();
        let stop = Stop {
            target_value: None,
            max_evals: Some(3000),
        };
        for name in ["pso", "apso", "fa"] {
            let cfg = OptimizerConfig::default_for(name).unwrap();
            let a = run(&cfg, &obj, 77, &stop).unwrap();
            let b = run(&cfg, &obj, 77, &stop).unwrap();
            assert_eq!(a, b);
            let c = run(&cfg, &obj, 78, &stop).unwrap();
            assert_ne!(a.best_point, c.best_point);
        }
    }

    #[test]
    fn budget_is_never_exceeded_and_trace_is_monotone() {
        let obj = builtin("ackley", 4, None).unwrap();
        for name in ["pso", "apso", "fa"] {
            for budget in [25, 137, 1000] {
                let stop = Stop {
                    target_value: None,
                    max_evals: Some(budget),
                };
                let rec =
                    run(&OptimizerConfig::default_for(name).unwrap(), &obj, 5, &stop).unwrap();
                assert!(rec.evaluations <= budget);
                assert!(rec
                    .trace
                    .windows(2)
                    .all(|w| w[1].best_value <= w[0].best_value));
                assert_eq!(rec.trace.last().unwrap().best_value, rec.best_value);
                assert_eq!(rec.trace.last().unwrap().iter, rec.iterations);
            }
        }
    }

    #[test]
    fn budget_below_population_is_a_config_error() {
        let obj = builtin("sphere", 2, None).unwrap();
        let stop = Stop {
            target_value: None,
            max_evals: Some(3),
        };
        let err = run(
            &OptimizerConfig::default_for("pso").unwrap(),
            &obj,
            1,
            &stop,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }

    #[test]
    fn iteration_guard() {
        let obj = builtin("sphere", 2, None).unwrap();
        let mut cfg = OptimizerConfig::default_for("apso").unwrap();
        cfg.set_max_iters(7);
        let rec = run(&cfg, &obj, 1, &Stop::default()).unwrap();
        assert_eq!(rec.iterations, 7);
        assert_eq!(rec.trace.len(), 8);
        assert_eq!(rec.evaluations, 20 * 8);
        assert_eq!(rec.trace[1].alpha_t, Some(0.5));
    }

    #[test]
    fn config_json_round_trip() {
        let cfg: OptimizerConfig = serde_json::from_str(
            r#"{"algo": "fa", "gamma": 0.5, "noise": {"kind": "levy", "beta": 1.5}}"#,
        )
        .unwrap();
        match &cfg {
            OptimizerConfig::Fa(c) => assert_eq!(c.gamma, 0.5),
            _ => panic!("wrong variant"),
        }
        assert!(serde_json::from_str::<OptimizerConfig>(r#"{"algo": "pso", "alpah": 1}"#).is_err());
    }
}
