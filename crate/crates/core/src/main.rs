use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use swarmkit::dynamics::{bifurcation_scan, classify_pso_regime, MapKind};
use swarmkit::harness::{self, ExperimentConfig, FigureKind, FigureParams, MsdRequest, WalkKind};
use swarmkit::swarm::OptimizerConfig;
use swarmkit::walks::recommended_step_size;
use swarmkit::Result;

#[derive(Parser)]
#[command(
    name = "swarmkit",
    version,
    about = "Swarm optimizers, random walks and map dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded optimization trials and write trials.csv, summary.json and traces.
    ///
    /// Values come from the built-in defaults, then --config, then the flags.
    Optimize(OptimizeArgs),
    /// Simulate one walk and write `step,x_0,...`.
    Walk {
        #[arg(long, default_value = "brownian")]
        kind: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 250)]
        steps: usize,
        #[arg(long, default_value_t = 1.5)]
        beta: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ensemble mean-squared displacement, written as `t,msd`.
    Msd {
        #[arg(long, default_value = "brownian")]
        kind: String,
        #[arg(long, default_value_t = 10_000)]
        ensemble: usize,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 1.5)]
        beta: f64,
        /// Shortest accepted Levy step length.
        #[arg(long, default_value_t = 0.0)]
        min_step: f64,
        /// Moment order q; below 2 writes `<|x|^q>^(2/q)` instead of the plain msd.
        #[arg(long, default_value_t = 2.0)]
        moment: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Long-run states of a 1-D map over a parameter grid, written as `param,state`.
    Bifurcation {
        #[arg(long, default_value = "fa")]
        map: String,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 4.5, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long, default_value_t = 1000)]
        burn_in: usize,
        #[arg(long, default_value_t = 200)]
        record: usize,
        #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
        u0: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lyapunov exponents of a 1-D map over a parameter grid, written as `param,lyapunov`.
    Lyapunov {
        #[arg(long, default_value = "fa")]
        map: String,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 4.5, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long, default_value_t = 10_000)]
        iters: usize,
        #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
        u0: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the eigenvalues and regime of the single-particle PSO system.
    PsoRegime {
        #[arg(long)]
        gamma: f64,
    },
    /// Log-binned histogram of Mantegna step lengths, written as `lo,hi,count,density`.
    LevyHist {
        #[arg(long, default_value_t = 1.5)]
        beta: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the random-walk step size `s = sqrt(tau) r / sqrt(t d)` with `r = L / 10`.
    StepSize {
        #[arg(long)]
        scale: f64,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        iters: u64,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value_t = 0.1)]
        r_fraction: f64,
    },
    /// Write the data behind one figure: bifurcation, levy_steps, levy_path, msd or trace.
    Figure {
        #[arg(long)]
        kind: String,
        /// JSON file holding a parameter object; unspecified fields take defaults.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    algo: Option<String>,
    #[arg(long)]
    objective: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_evals: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    target: Option<f64>,
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OptimizeArgs {
    fn into_config(self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_json_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(a) = self.algo {
            if a != cfg.optimizer.name() {
                cfg.optimizer = OptimizerConfig::default_for(&a)?;
            }
        }
        if let Some(o) = self.objective {
            if o != cfg.objective.name {
                cfg.objective.bounds = None;
            }
            cfg.objective.name = o;
        }
        if let Some(d) = self.dim {
            cfg.objective.dim = d;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.max_evals.is_some() {
            cfg.max_evals = self.max_evals;
        }
        if self.target.is_some() {
            cfg.target_value = self.target;
        }
        if self.jobs.is_some() {
            cfg.jobs = self.jobs;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        Ok(cfg)
    }
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Optimize(args) => {
            let cfg = args.into_config()?;
            let dir = cfg.out.clone().ok_or_else(|| swarmkit::Error::Config {
                field: "out".into(),
                message: "an output directory is required".into(),
            })?;
            let result = harness::run_experiment(&cfg)?;
            harness::write_experiment(&dir, &result)?;
            let s = &result.summary;
            println!(
                "{} on {} (d={}), {} trials: best min {:e} median {:e} mean {:e} std {:e}",
                s.algo,
                s.objective,
                s.dim,
                s.trials,
                s.best_value.min,
                s.best_value.median,
                s.best_value.mean,
                s.best_value.std
            );
            if let Some(rate) = s.success_rate {
                println!("success rate {rate}");
            }
        }
        Command::Walk {
            kind,
            dim,
            steps,
            beta,
            seed,
            out,
        } => {
            let path = harness::walk(kind.parse::<WalkKind>()?, dim, steps, beta, seed)?;
            harness::write_walk(&out, &path)?;
        }
        Command::Msd {
            kind,
            ensemble,
            steps,
            dim,
            beta,
            min_step,
            moment,
            seed,
            out,
        } => {
            let stats = harness::msd(&MsdRequest {
                kind: kind.parse::<WalkKind>()?,
                dim,
                ensemble,
                steps,
                beta,
                min_step,
                moment,
                seed,
            })?;
            harness::write_msd(&out, &stats)?;
            if let Some(e) = stats.fitted_exponent {
                println!("msd exponent {e:.4}");
            }
        }
        Command::Bifurcation {
            map,
            from,
            to,
            grid,
            burn_in,
            record,
            u0,
            out,
        } => {
            let cols =
                bifurcation_scan(map.parse::<MapKind>()?, from, to, grid, u0, burn_in, record)?;
            harness::write_bifurcation(&out, &cols)?;
        }
        Command::Lyapunov {
            map,
            from,
            to,
            grid,
            iters,
            u0,
            out,
        } => {
            let rows = harness::lyapunov_scan(map.parse::<MapKind>()?, from, to, grid, u0, iters)?;
            harness::write_lyapunov(&out, &rows)?;
        }
        Command::PsoRegime { gamma } => {
            let r = classify_pso_regime(gamma)?;
            let (a, b) = r.eigenvalues;
            println!("gamma {gamma}");
            println!("lambda1 {} {:+}i  |lambda1| {}", a.re, a.im, a.norm());
            println!("lambda2 {} {:+}i  |lambda2| {}", b.re, b.im, b.norm());
            println!("regime {}", r.classification.as_str());
            println!(
                "trajectory check {}",
                if r.verified { "passed" } else { "failed" }
            );
        }
        Command::LevyHist {
            beta,
            samples,
            seed,
            out,
        } => {
            let (bins, fit) = harness::levy_hist(beta, samples, seed)?;
            harness::write_hist(&out, &bins)?;
            println!(
                "tail slope {:.4} over [{:.4e}, {:.4e}] (expected {})",
                fit.slope,
                fit.lower,
                fit.upper,
                -(1.0 + beta)
            );
        }
        Command::StepSize {
            scale,
            dim,
            iters,
            tau,
            r_fraction,
        } => {
            let s = recommended_step_size(scale, dim, iters, tau, r_fraction)?;
            println!("{s}");
        }
        Command::Figure {
            kind,
            params,
            seed,
            out,
        } => {
            let kind = kind.parse::<FigureKind>()?;
            let mut p: FigureParams = match params {
                Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
                None => FigureParams::default(),
            };
            if let Some(s) = seed {
                p.seed = s;
            }
            harness::emit_figure_data(kind, &p, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
