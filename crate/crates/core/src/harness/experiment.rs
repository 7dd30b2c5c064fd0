use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::table::{fmt_f64, fmt_opt, header, indexed, write_csv, write_json};
use crate::objectives::{builtin, Objective};
use crate::stats::Summary;
use crate::stochastic::{child_seed, GENERATOR_ID};
use crate::swarm::{run, OptimizerConfig, Stop, TrialRecord};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveSpec {
    pub name: String,
    pub dim: usize,
    /// Per-coordinate box; the benchmark's usual domain when absent.
    #[serde(default)]
    pub bounds: Option<(f64, f64)>,
}

impl Default for ObjectiveSpec {
    fn default() -> Self {
        ObjectiveSpec {
            name: "sphere".into(),
            dim: 5,
            bounds: None,
        }
    }
}

impl ObjectiveSpec {
    pub fn build(&self) -> Result<Objective> {
        builtin(&self.name, self.dim, self.bounds)
    }
}

/// One optimization experiment. Every field has a default, so a config file
/// may list only what it changes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub optimizer: OptimizerConfig,
    pub objective: ObjectiveSpec,
    pub trials: usize,
    /// Trial `k` runs from `child_seed(seed, k)`.
    pub seed: u64,
    pub max_evals: Option<u64>,
    pub target_value: Option<f64>,
    /// Worker threads; all available cores when absent.
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            optimizer: OptimizerConfig::Apso(Default::default()),
            objective: ObjectiveSpec::default(),
            trials: 1,
            seed: 0,
            max_evals: None,
            target_value: None,
            jobs: None,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn stop(&self) -> Stop {
        Stop {
            target_value: self.target_value,
            max_evals: self.max_evals,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trials", "must be >= 1"));
        }
        if self.jobs == Some(0) {
            return Err(Error::config("jobs", "must be >= 1"));
        }
        if let Some(t) = self.target_value {
            if t.is_nan() {
                return Err(Error::config("target_value", "must not be NaN"));
            }
        }
        self.optimizer.validate()?;
        self.objective.build()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub algo: String,
    pub objective: String,
    pub dim: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    pub generator: String,
    pub max_evals: Option<u64>,
    pub target_value: Option<f64>,
    pub best_value: Summary,
    pub evaluations: Summary,
    /// Fraction of trials with best value `<= target_value`.
    pub success_rate: Option<f64>,
    /// The config with `jobs` and `out` cleared, as neither affects results.
    pub config: ExperimentConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub summary: ExperimentSummary,
    pub records: Vec<TrialRecord>,
}

/// Runs `cfg.trials` independent seeded trials, up to `cfg.jobs` at a time.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let obj = cfg.objective.build()?;
    let stop = cfg.stop();
    let trial = |k: usize| -> Result<TrialRecord> {
        let seed = child_seed(cfg.seed, k as u64);
        let mut rec = run(&cfg.optimizer, &obj, seed, &stop)?;
        rec.trial = k;
        Ok(rec)
    };
    let run_all = || {
        (0..cfg.trials)
            .into_par_iter()
            .map(trial)
            .collect::<Result<Vec<_>>>()
    };
    let records = match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::config("jobs", e.to_string()))?
            .install(run_all)?,
        None => run_all()?,
    };
    let summary = summarize(cfg, &records);
    Ok(ExperimentResult { summary, records })
}

pub fn summarize(cfg: &ExperimentConfig, records: &[TrialRecord]) -> ExperimentSummary {
    let best: Vec<f64> = records.iter().map(|r| r.best_value).collect();
    let evals: Vec<f64> = records.iter().map(|r| r.evaluations as f64).collect();
    let success_rate = cfg
        .target_value
        .map(|t| records.iter().filter(|r| r.reached(t)).count() as f64 / records.len() as f64);
    ExperimentSummary {
        algo: cfg.optimizer.name().to_string(),
        objective: cfg.objective.name.clone(),
        dim: cfg.objective.dim,
        trials: records.len(),
        master_seed: cfg.seed,
        seeds: records.iter().map(|r| r.seed).collect(),
        generator: GENERATOR_ID.to_string(),
        max_evals: cfg.max_evals,
        target_value: cfg.target_value,
        best_value: Summary::of(&best),
        evaluations: Summary::of(&evals),
        success_rate,
        config: ExperimentConfig {
            jobs: None,
            out: None,
            ..cfg.clone()
        },
    }
}

pub fn trace_header() -> Vec<String> {
    header(&["iter", "best_value", "alpha_t"])
}

pub fn write_trace(path: &Path, rec: &TrialRecord) -> Result<()> {
    let rows = rec.trace.iter().map(|r| {
        vec![
            r.iter.to_string(),
            fmt_f64(r.best_value),
            fmt_opt(r.alpha_t),
        ]
    });
    write_csv(path, &trace_header(), rows)
}

/// Writes `trials.csv`, `summary.json` and one `trace_KKK.csv` per trial.
pub fn write_experiment(dir: &Path, result: &ExperimentResult) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let dim = result.summary.dim;
    let mut cols = header(&["trial", "seed", "best_value", "evaluations", "iterations"]);
    cols.extend(indexed("x", dim));
    let rows = result.records.iter().map(|r| {
        let mut row = vec![
            r.trial.to_string(),
            r.seed.to_string(),
            fmt_f64(r.best_value),
            r.evaluations.to_string(),
            r.iterations.to_string(),
        ];
        row.extend(r.best_point.iter().map(|&x| fmt_f64(x)));
        row
    });
    write_csv(&dir.join("trials.csv"), &cols, rows)?;
    write_json(&dir.join("summary.json"), &result.summary)?;
    for r in &result.records {
        write_trace(&dir.join(format!("trace_{:03}.csv", r.trial)), r)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(algo: &str) -> ExperimentConfig {
        ExperimentConfig {
            optimizer: OptimizerConfig::default_for(algo).unwrap(),
            objective: ObjectiveSpec {
                name: "sphere".into(),
                dim: 3,
                bounds: None,
            },
            trials: 4,
            seed: 11,
            max_evals: Some(2000),
            ..Default::default()
        }
    }

    #[test]
    fn seeds_follow_the_documented_scheme() {
        let res = run_experiment(&small("fa")).unwrap();
        let expected: Vec<u64> = (0..4).map(|k| child_seed(11, k)).collect();
        assert_eq!(res.summary.seeds, expected);
        assert!(res.records.iter().enumerate().all(|(k, r)| r.trial == k));
    }

    #[test]
    fn job_count_does_not_change_results() {
        let mut a = small("pso");
        a.jobs = Some(1);
        let mut b = a.clone();
        b.jobs = Some(3);
        assert_eq!(
            run_experiment(&a).unwrap().records,
            run_experiment(&b).unwrap().records
        );
    }

    #[test]
    fn success_rate_counts_targets() {
        let mut cfg = small("apso");
        cfg.target_value = Some(f64::INFINITY);
        assert_eq!(
            run_experiment(&cfg).unwrap().summary.success_rate,
            Some(1.0)
        );
        cfg.target_value = Some(-1.0);
        assert_eq!(
            run_experiment(&cfg).unwrap().summary.success_rate,
            Some(0.0)
        );
        cfg.target_value = None;
        assert_eq!(run_experiment(&cfg).unwrap().summary.success_rate, None);
    }

    #[test]
    fn invalid_fields_are_named() {
        let mut cfg = small("fa");
        cfg.trials = 0;
        match run_experiment(&cfg).unwrap_err() {
            Error::Config { field, .. } => assert_eq!(field, "trials"),
            e => panic!("{e}"),
        }
        let mut cfg = small("fa");
        cfg.objective.name = "nope".into();
        assert!(run_experiment(&cfg).is_err());
    }

    #[test]
    fn partial_config_json() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"optimizer": {"algo": "pso", "inertia": 0.7}, "objective": {"name": "ackley", "dim": 2}, "trials": 3}"#,
        )
        .unwrap();
        assert_eq!(cfg.trials, 3);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.objective.dim, 2);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"trails": 3}"#).is_err());
    }
}
