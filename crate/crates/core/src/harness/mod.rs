//! Experiment orchestration: configuration, file formats, the Gaussian
//! success-rate sweep, the antenna benchmark and retrieval from files.
//!
//! Trials are independent and run on the rayon pool; records are merged in
//! (sweep point, trial, method) order so outputs do not depend on scheduling.

pub mod antenna;
pub mod config;
pub mod io;
pub mod solve;
pub mod sweep;
pub mod trial;

pub use antenna::{run_antenna_benchmark, write_antenna, AntennaResult, CutTable, DeviationRow, ScenarioRow};
pub use config::{AntennaConfig, ExperimentConfig, ExperimentKind, GaussConfig, Method, SolverConfig};
pub use solve::{run_solve, solve_problem, write_solve, SolveFiles, SolveOutput, SolveSummary};
pub use sweep::{gauss_trial, run_gauss_sweep, write_sweep, SummaryRow, SweepPoint, SweepResult};
pub use trial::{run_method, Measurement, MethodRun, TrialRecord};

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "PCPR_THREADS";
