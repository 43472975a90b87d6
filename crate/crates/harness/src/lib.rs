//! Experiment runner and command-line front end for the `sata-core` solvers.
//!
//! An [`ExperimentGrid`] sweeps one generator parameter, generates a fresh
//! instance per sweep value and repetition, runs every requested algorithm
//! on that same instance, validates the outputs and collects one
//! [`MetricsRecord`] per run. Records go to CSV for external plotting.

pub mod cli;
pub mod grid;
pub mod metrics;
pub mod runner;
pub mod stats;

pub use grid::{Algorithm, ExperimentGrid, GridError, SweepFactor};
pub use metrics::{read_metrics_csv, write_metrics_csv, MetricsRecord};
pub use runner::{derive_seed, run_experiment, run_experiment_with, RunError, RunOptions};
