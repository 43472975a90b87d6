//! The `sata` command.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags, invalid grid
//! shape), 2 for data errors (unreadable or malformed files, instances the
//! exact solver refuses, invalid assignments). Diagnostics go to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sata_core::{exact_optimal, generate_instance, io, validate, CountRange, GenParams, MappingBound};

use crate::grid::{Algorithm, ExperimentGrid, GridError};
use crate::metrics::write_metrics_csv;
use crate::runner::{run_experiment_with, solve_with, RunError, RunOptions};

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "SATA_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "sata",
    version,
    about = "Specialty-aware task assignment solvers and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance file.
    Solve(SolveArgs),
    /// Generate a synthetic instance.
    Generate(GenerateArgs),
    /// Run an experiment grid and write metrics CSV.
    Bench(BenchArgs),
    /// Check an assignment against an instance.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolveAlgorithm {
    Tba,
    Aba,
    Random,
    Exact,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    algorithm: SolveAlgorithm,
    /// Seed for the random baseline.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the assignment JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest worker count the exact solver accepts.
    #[arg(long, default_value_t = MappingBound::default().max_workers)]
    max_workers: usize,
    /// Largest task count the exact solver accepts.
    #[arg(long, default_value_t = MappingBound::default().max_tasks)]
    max_tasks: usize,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// JSON generator parameters; flags below override its fields.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    tasks: Option<u32>,
    #[arg(long)]
    workers: Option<u32>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    mean_budget: Option<f64>,
    #[arg(long)]
    mean_price: Option<f64>,
    #[arg(long)]
    skills: Option<u32>,
    /// Skills per worker as MIN..MAX.
    #[arg(long, value_parser = parse_range)]
    worker_skills: Option<CountRange>,
    /// Skills per task as MIN..MAX.
    #[arg(long, value_parser = parse_range)]
    task_skills: Option<CountRange>,
    #[arg(long)]
    area_side: Option<f64>,
    #[arg(long)]
    budget_sd: Option<f64>,
    #[arg(long)]
    price_sd: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    grid: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Record every runtime as 0 so the CSV depends only on the grid.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    assignment: PathBuf,
}

fn parse_range(s: &str) -> Result<CountRange, String> {
    let (lo, hi) = s.split_once("..").ok_or("expected MIN..MAX")?;
    let lo = lo.trim().parse().map_err(|_| format!("bad minimum {lo:?}"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad maximum {hi:?}"))?;
    Ok(CountRange::new(lo, hi))
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

fn data(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn solve(args: SolveArgs, out: &mut impl Write) -> Result<(), Failure> {
    let instance = io::load_instance(&args.instance).map_err(data)?;
    let assignment = match args.algorithm {
        SolveAlgorithm::Exact => {
            let bound = MappingBound::new(args.max_workers, args.max_tasks).map_err(usage)?;
            exact_optimal(&instance, bound).map_err(data)?
        }
        SolveAlgorithm::Tba => solve_with(Algorithm::Tba, &instance, args.seed).assignment,
        SolveAlgorithm::Aba => solve_with(Algorithm::Aba, &instance, args.seed).assignment,
        SolveAlgorithm::Random => solve_with(Algorithm::Random, &instance, args.seed).assignment,
    };
    let report = validate(&instance, &assignment);
    if !report.is_valid() {
        return Err(data(format!("solver produced an invalid assignment:\n{report}")));
    }
    if let Some(path) = &args.out {
        io::save_assignment(&assignment, path).map_err(data)?;
    }
    let completed = assignment.completed_count();
    let _ = writeln!(out, "total utility: {:.9}", instance.total_utility(&assignment));
    let _ = writeln!(
        out,
        "{completed} {} completed",
        if completed == 1 { "task" } else { "tasks" }
    );
    Ok(())
}

fn generate(args: GenerateArgs) -> Result<(), Failure> {
    let mut p = match &args.params {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<GenParams>(&text).map_err(|e| data(format!("{}: {e}", path.display())))?
        }
        None => GenParams::default(),
    };
    macro_rules! set {
        ($($flag:ident => $field:ident),*) => {
            $(if let Some(v) = args.$flag { p.$field = v; })*
        };
    }
    set!(tasks => n_tasks, workers => n_workers, gamma => gamma, mean_budget => mean_budget,
         mean_price => mean_price, skills => n_skills, worker_skills => skills_per_worker,
         task_skills => skills_per_task, area_side => area_side, seed => seed);
    if args.budget_sd.is_some() {
        p.budget_sd = args.budget_sd;
    }
    if args.price_sd.is_some() {
        p.price_sd = args.price_sd;
    }
    let instance =
        generate_instance(&p).map_err(|e| if args.params.is_some() { data(e) } else { usage(e) })?;
    io::save_instance(&instance, &args.out).map_err(data)
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let grid = ExperimentGrid::load(&args.grid).map_err(data)?;
    let options = RunOptions {
        timing: !args.no_timing,
    };
    let records = run_experiment_with(&grid, options).map_err(|e| match e {
        RunError::Grid(GridError::Invalid(_)) => usage(e),
        other => data(other),
    })?;
    write_metrics_csv(&records, &args.out).map_err(data)
}

fn check(args: ValidateArgs, out: &mut impl Write) -> Result<(), Failure> {
    let instance = io::load_instance(&args.instance).map_err(data)?;
    let assignment = io::load_assignment(&args.assignment).map_err(data)?;
    let report = validate(&instance, &assignment);
    if report.is_valid() {
        let _ = writeln!(out, "valid");
        Ok(())
    } else {
        Err(data(report.to_string().trim_end()))
    }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code.
pub fn main<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Solve(a) => solve(a, out),
        Command::Generate(a) => generate(a),
        Command::Bench(a) => bench(a),
        Command::Validate(a) => check(a, out),
    });
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
