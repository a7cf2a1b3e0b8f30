//! Experiment runner for `halfline-core`: INI configs, presets, sweeps,
//! CSV and SVG output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod presets;
pub mod report;
pub mod svg;
pub mod sweep;

pub use config::{ExperimentConfig, Preset, ProblemConfig, SweepConfig};
pub use error::{CliError, CliResult};
pub use presets::run_experiment;
pub use report::{Check, Manifest, Report, Status};
pub use sweep::{run_cells, sweep, write_summary_csv, CellResult, CellSummary};
