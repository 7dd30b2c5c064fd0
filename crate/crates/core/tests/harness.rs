use swarmkit::harness::{run_experiment, write_experiment, ExperimentConfig, ObjectiveSpec};
use swarmkit::objectives::Objective;
use swarmkit::stats::Summary;
use swarmkit::swarm::{run, OptimizerConfig, Stop};

fn sphere_cfg(algo: &str, trials: usize, max_evals: u64) -> ExperimentConfig {
    ExperimentConfig {
        optimizer: OptimizerConfig::default_for(algo).unwrap(),
        objective: ObjectiveSpec {
            name: "sphere".into(),
            dim: 5,
            bounds: None,
        },
        trials,
        seed: 2,
        max_evals: Some(max_evals),
        ..Default::default()
    }
}

#[test]
fn summary_matches_trial_csv() {
    let dir = tempfile::tempdir().unwrap();
    let res = run_experiment(&sphere_cfg("fa", 6, 3000)).unwrap();
    write_experiment(dir.path(), &res).unwrap();
    let mut r = csv::Reader::from_path(dir.path().join("trials.csv")).unwrap();
    let mut best = Vec::new();
    let mut evals = Vec::new();
    for rec in r.records() {
        let rec = rec.unwrap();
        best.push(rec[2].parse::<f64>().unwrap());
        evals.push(rec[3].parse::<f64>().unwrap());
    }
    let text = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
    let summary: serde_json::Value = serde_json::from_str(&text).unwrap();
    let emitted: Summary = serde_json::from_value(summary["best_value"].clone()).unwrap();
    let again = Summary::of(&best);
    for (a, b) in [
        (emitted.min, again.min),
        (emitted.median, again.median),
        (emitted.mean, again.mean),
        (emitted.std, again.std),
        (emitted.max, again.max),
    ] {
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300), "{a} vs {b}");
    }
    let emitted: Summary = serde_json::from_value(summary["evaluations"].clone()).unwrap();
    assert_eq!(emitted, Summary::of(&evals));
    assert_eq!(summary["generator"], swarmkit::stochastic::GENERATOR_ID);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut cfg = sphere_cfg("pso", 3, 2000);
    cfg.target_value = Some(1e-6);
    write_experiment(a.path(), &run_experiment(&cfg).unwrap()).unwrap();
    cfg.jobs = Some(1);
    write_experiment(b.path(), &run_experiment(&cfg).unwrap()).unwrap();
    for f in [
        "trials.csv",
        "summary.json",
        "trace_000.csv",
        "trace_002.csv",
    ] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn constant_objective() {
    let obj = Objective::boxed("flat", 3, -1.0, 1.0, |_| 2.5).unwrap();
    for algo in ["pso", "apso", "fa"] {
        let stop = Stop {
            target_value: None,
            max_evals: Some(200),
        };
        let rec = run(&OptimizerConfig::default_for(algo).unwrap(), &obj, 4, &stop).unwrap();
        assert_eq!(rec.best_value, 2.5);
    }
}

#[test]
fn success_rate_against_constant_target() {
    let mut cfg = sphere_cfg("apso", 1, 100);
    cfg.objective.bounds = Some((3.0, 4.0));
    // the box excludes the optimum, so the best value is at least 5 * 9 = 45
    cfg.target_value = Some(45.0 - 1e-9);
    assert_eq!(
        run_experiment(&cfg).unwrap().summary.success_rate,
        Some(0.0)
    );
    cfg.target_value = Some(80.0);
    assert_eq!(
        run_experiment(&cfg).unwrap().summary.success_rate,
        Some(1.0)
    );
}

#[test]
fn apso_and_fa_at_equal_budget() {
    let apso = run_experiment(&sphere_cfg("apso", 20, 10_000)).unwrap();
    let fa = run_experiment(&sphere_cfg("fa", 20, 10_000)).unwrap();
    for s in [&apso.summary, &fa.summary] {
        assert_eq!(s.trials, 20);
        assert!(s.best_value.median.is_finite());
        assert!(s.evaluations.max <= 10_000.0);
    }
}

#[test]
fn traces_are_monotone_and_within_budget() {
    for algo in ["pso", "apso", "fa"] {
        let res = run_experiment(&sphere_cfg(algo, 5, 1234)).unwrap();
        for r in &res.records {
            assert!(r.evaluations <= 1234);
            assert!(r
                .trace
                .windows(2)
                .all(|w| w[1].best_value <= w[0].best_value));
        }
    }
}
