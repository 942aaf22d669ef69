//! Ingestion, synthetic data, composable core-sets and the experiment runner.

pub mod composable;
pub mod config;
pub mod experiment;
pub mod ingest;
pub mod synth;

pub use composable::{color_abiding_coreset, composable_coreset};
pub use config::{ExperimentConfig, QuotaSpec};
pub use experiment::{run_experiment, run_on_dataset, Report, RunOptions};
pub use ingest::{assign_colors_by_time, ingest, load_dataset, Format, Label, RawRecord};
pub use synth::{gaussian_mixture, SyntheticSpec};
