//! Runs an experiment grid.
//!
//! Instances of one sweep value are generated in parallel. Timed solver runs
//! then happen one at a time on the calling thread so no other solver
//! competes for the core; untimed runs are spread over the thread pool.
//! Either way the records come out in the same order: sweep value,
//! repetition, then algorithm in grid order.

use std::time::Instant;

use rayon::prelude::*;
use sata_core::oracle::solve_random_report;
use sata_core::{generate_instance, validate, GenParams, GreedySolver, Instance, ParamsError, SolveReport};
use thiserror::Error;

use crate::grid::{Algorithm, ExperimentGrid, GridError};
use crate::metrics::MetricsRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Measure wall-clock runtime; when off every runtime is recorded as 0
    /// and the output depends only on the grid.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { timing: true }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("{factor} = {value}, repetition {repetition}: {source}")]
    Params {
        factor: String,
        value: f64,
        repetition: u32,
        source: ParamsError,
    },
    #[error(
        "{algorithm} produced an invalid assignment for {factor} = {value}, repetition {repetition} \
         (seed {seed}):\n{report}"
    )]
    InvalidOutput {
        algorithm: Algorithm,
        factor: String,
        value: f64,
        repetition: u32,
        seed: u64,
        report: String,
    },
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Instance seed for one grid cell; stable across releases.
pub fn derive_seed(grid_seed: u64, value_index: usize, repetition: u32) -> u64 {
    mix(mix(mix(grid_seed) ^ value_index as u64) ^ u64::from(repetition))
}

/// Runs one grid algorithm. The random baseline is seeded with the instance
/// seed so reruns reproduce it.
pub fn solve_with(algorithm: Algorithm, instance: &Instance, seed: u64) -> SolveReport {
    match algorithm {
        Algorithm::Tba => GreedySolver::TBA.solve(instance),
        Algorithm::Aba => GreedySolver::ABA.solve(instance),
        Algorithm::Random => solve_random_report(instance, seed),
        Algorithm::Exact => panic!("the exact solver is not a grid algorithm"),
    }
}

struct Run {
    report: SolveReport,
    runtime: f64,
}

fn timed(algorithm: Algorithm, instance: &Instance, seed: u64, timing: bool) -> Run {
    if !timing {
        return Run {
            report: solve_with(algorithm, instance, seed),
            runtime: 0.0,
        };
    }
    let start = Instant::now();
    let report = solve_with(algorithm, instance, seed);
    Run {
        runtime: start.elapsed().as_secs_f64(),
        report,
    }
}

/// [`run_experiment_with`] with runtime measurement on.
pub fn run_experiment(grid: &ExperimentGrid) -> Result<Vec<MetricsRecord>, RunError> {
    run_experiment_with(grid, RunOptions::default())
}

pub fn run_experiment_with(
    grid: &ExperimentGrid,
    options: RunOptions,
) -> Result<Vec<MetricsRecord>, RunError> {
    grid.validate()?;
    let factor = grid.sweep_factor;
    let mut records =
        Vec::with_capacity(grid.sweep_values.len() * grid.repetitions as usize * grid.algorithms.len());

    for (vi, &value) in grid.sweep_values.iter().enumerate() {
        let cells: Vec<(u32, GenParams)> = (0..grid.repetitions)
            .map(|rep| {
                let mut p = grid.params_for(value);
                p.seed = derive_seed(grid.seed, vi, rep);
                (rep, p)
            })
            .collect();
        let instances = cells
            .par_iter()
            .map(|(rep, p)| {
                generate_instance(p).map_err(|source| RunError::Params {
                    factor: factor.to_string(),
                    value,
                    repetition: *rep,
                    source,
                })
            })
            .collect::<Result<Vec<Instance>, RunError>>()?;

        let solve_cell = |rep: usize| -> Vec<Run> {
            grid.algorithms
                .iter()
                .map(|&a| timed(a, &instances[rep], cells[rep].1.seed, options.timing))
                .collect()
        };
        let runs: Vec<Vec<Run>> = if options.timing {
            (0..cells.len()).map(solve_cell).collect()
        } else {
            (0..cells.len()).into_par_iter().map(solve_cell).collect()
        };

        let checks: Vec<Option<RunError>> = runs
            .par_iter()
            .enumerate()
            .flat_map_iter(|(rep, row)| {
                let instance = &instances[rep];
                let (repetition, seed) = (cells[rep].0, cells[rep].1.seed);
                row.iter().zip(&grid.algorithms).map(move |(run, &algorithm)| {
                    let report = validate(instance, &run.report.assignment);
                    (!report.is_valid()).then(|| RunError::InvalidOutput {
                        algorithm,
                        factor: factor.to_string(),
                        value,
                        repetition,
                        seed,
                        report: report.to_string(),
                    })
                })
            })
            .collect();
        if let Some(err) = checks.into_iter().flatten().next() {
            return Err(err);
        }

        for (rep, row) in runs.into_iter().enumerate() {
            let instance = &instances[rep];
            for (run, &algorithm) in row.into_iter().zip(&grid.algorithms) {
                records.push(MetricsRecord {
                    algorithm,
                    factor,
                    value,
                    repetition: cells[rep].0,
                    utility: instance.total_utility(&run.report.assignment),
                    runtime: run.runtime,
                    memory_estimate: (run.report.peak_bytes + instance.heap_bytes()) as u64,
                    completed_tasks: run.report.assignment.completed_count() as u32,
                    seed_used: cells[rep].1.seed,
                });
            }
        }
    }
    Ok(records)
}
