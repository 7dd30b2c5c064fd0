use std::collections::HashMap;

use swarmkit::objectives::builtin;
use swarmkit::stats::median;
use swarmkit::stochastic::{child_seed, RngStream};
use swarmkit::swarm::{
    fa_step, run, FaConfig, OptimizerConfig, PsoConfig, Schedule, Stop, SwarmState,
};

/// Lattice points within `radius` of at least `min_hosts` fireflies.
fn occupied_optima(positions: &[Vec<f64>], radius: f64, min_hosts: usize) -> usize {
    let mut hosts: HashMap<Vec<i64>, usize> = HashMap::new();
    for x in positions {
        let site: Vec<i64> = x.iter().map(|v| v.round() as i64).collect();
        let r2: f64 = x
            .iter()
            .zip(&site)
            .map(|(v, s)| (v - *s as f64).powi(2))
            .sum();
        if r2.sqrt() < radius {
            *hosts.entry(site).or_default() += 1;
        }
    }
    hosts.values().filter(|&&n| n >= min_hosts).count()
}

#[test]
fn fa_occupies_several_rastrigin_optima() {
    // Low randomization, so attraction decides where fireflies settle.
    let cfg = FaConfig {
        gamma: 1.0,
        alpha: 0.01,
        alpha_schedule: Schedule::Constant,
        population: 25,
        ..Default::default()
    };
    let counts: Vec<f64> = (0..20)
        .map(|k| {
            let mut obj = builtin("rastrigin", 2, None).unwrap();
            let mut st =
                SwarmState::initialize(&mut obj, 25, RngStream::new(child_seed(7, k)), false)
                    .unwrap();
            for _ in 0..500 {
                fa_step(&mut st, &cfg, &mut obj).unwrap();
            }
            occupied_optima(&st.positions, 0.25, 2) as f64
        })
        .collect();
    let median = median(&counts);
    assert!(
        median >= 3.0,
        "median occupied optima {median}, counts {counts:?}"
    );
}

#[test]
fn pso_with_inertia_solves_sphere() {
    let obj = builtin("sphere", 5, None).unwrap();
    let cfg = OptimizerConfig::Pso(PsoConfig {
        inertia: Some(0.7),
        population: 20,
        max_iters: 2000,
        ..Default::default()
    });
    let stop = Stop {
        target_value: None,
        max_evals: None,
    };
    let best: Vec<f64> = (0..20)
        .map(|k| {
            run(&cfg, &obj, child_seed(11, k), &stop)
                .unwrap()
                .best_value
        })
        .collect();
    assert!(median(&best) < 1e-3, "median {}", median(&best));
}
