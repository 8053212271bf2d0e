//! Batch experiments: parameter grids, Monte Carlo error rates, measured
//! costs against their theoretical bounds, and CSV/JSON reports.

mod compare;
mod config;
mod report;
mod run;

pub use compare::{compare_bounds, ComparisonRow};
pub use config::{AlgorithmKind, ExperimentConfig, OutputFormat, ProtocolKind, SamplingRateKind};
pub use report::{Record, Report, Status};
pub use run::{mc_slack, run_experiment, run_experiment_with};
