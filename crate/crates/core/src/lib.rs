//! Specialty-aware task assignment.
//!
//! Workers own skills with individual fees and are paid a transport fee
//! proportional to their distance from the task they join. Tasks need a set
//! of skills and have a budget. The crate provides the model and its cost
//! arithmetic ([`model`]), assignment checking ([`validate`]), the two greedy
//! heuristics ([`solver`]), an exact small-instance solver and a random
//! baseline ([`oracle`]), a seeded instance generator ([`datagen`]) and JSON
//! file support ([`io`]).

pub mod datagen;
pub mod error;
pub mod io;
pub mod model;
pub mod oracle;
pub mod skills;
pub mod solver;
#[cfg(feature = "testkit")]
pub mod testkit;
pub mod validate;

pub use datagen::{generate_instance, CountRange, GenParams};
pub use error::{IoError, ModelError, OracleError, ParamsError};
pub use model::{
    Assignment, Contract, DistanceMatrix, Instance, Point, SkillFee, Task, TaskId, Worker, WorkerId,
};
pub use oracle::{exact_optimal, mapped_task_cost, solve_random, MappingBound};
pub use skills::{SkillId, SkillSet};
pub use solver::{
    best_subset_for_worker, greedy_cover_task, solve_aba, solve_tba, task_order, Candidate, GreedySolver,
    SolveReport, SubsetRule, TaskAttempt, TaskOrder, WorkerPool,
};
pub use validate::{validate, ValidationReport, Violation};
