//! Benchmark driver: experiment configs, multi-method runs, relative gaps and
//! CSV outputs for the `nads` binary.

pub mod config;
pub mod error;
pub mod experiment;
pub mod gaps;
pub mod output;

pub use config::{ExperimentConfig, Method, StartSpec};
pub use error::{CliError, Result};
pub use experiment::{run_experiment, run_on_graph, ExperimentReport, RunRecord};
pub use gaps::{compute_gap_series, GapAxis, GapSeries, Trace};
pub use output::emit_outputs;
