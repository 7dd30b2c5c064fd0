//! Multi-trial experiments and the CSV / JSON files behind the CLI.
//!
//! Every file is a deterministic function of its parameters and seed. CSV
//! files use a header row, commas, LF line endings and 17 significant digits.
//! Trial `k` of an experiment with master seed `m` runs from
//! `splitmix64(m ^ splitmix64(k))`.

mod experiment;
mod figure;
pub mod table;

pub use experiment::{
    run_experiment, summarize, trace_header, write_experiment, write_trace, ExperimentConfig,
    ExperimentResult, ExperimentSummary, ObjectiveSpec,
};
pub use figure::{
    emit_figure_data, levy_hist, levy_steps, log_times, lyapunov_scan, msd, trace, walk,
    write_bifurcation, write_hist, write_lyapunov, write_msd, write_walk, FigureKind, FigureParams,
    MsdRequest, WalkKind,
};
