use thiserror::Error;

use crate::model::{TaskId, WorkerId};
use crate::skills::SkillId;

/// Misuse of the model API: bad ids, skills a worker does not own, or an
/// instance that breaks its construction invariants.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("unknown worker {0}")]
    UnknownWorker(WorkerId),
    #[error("unknown task {0}")]
    UnknownTask(TaskId),
    #[error("worker {worker} does not own skill {skill}")]
    SkillNotOwned { worker: WorkerId, skill: SkillId },
    #[error("empty skill set for worker {0}")]
    EmptySkillSet(WorkerId),
    #[error("invalid instance at {location}: {message}")]
    InvalidInstance { location: String, message: String },
}

/// Refusal of the exact solver to enumerate an instance that is too large.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(
        "instance has {workers} workers and {tasks} tasks; exact search is limited to \
         {max_workers} workers and {max_tasks} tasks"
    )]
    TooLarge {
        workers: usize,
        tasks: usize,
        max_workers: usize,
        max_tasks: usize,
    },
    #[error("mapping bound ({max_tasks}+1)^{max_workers} exceeds the enumeration budget of 1e8")]
    BoundTooLarge { max_workers: usize, max_tasks: usize },
}

/// Invalid generator parameters.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid generator parameters: {0}")]
pub struct ParamsError(pub String);

/// Failure to read or write an instance or assignment file.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON at line {line}, column {column}: {message}")]
    Json {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: schema error at {location}: {message}")]
    Schema {
        path: String,
        location: String,
        message: String,
    },
}
