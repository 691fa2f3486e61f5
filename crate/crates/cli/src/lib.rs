//! Experiment orchestration for the `mivor` command-line tool.

pub mod config;
pub mod experiment;
pub mod report;

pub use config::{ExperimentConfig, Overrides};
pub use experiment::{execute, run_experiment, Outcome, Replication, Summary};
