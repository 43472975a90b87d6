//! Problem data and the cost arithmetic every algorithm shares.
//!
//! A worker is hired by at most one task and paid a transport fee
//! (`gamma * distance`) plus the fees of the skills it actually exercises.
//! A task is completed when its hired workers jointly cover every required
//! skill without exceeding its budget; its utility is the unspent budget,
//! or zero when it is not completed.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::skills::{SkillId, SkillSet};

/// Absolute slack on budget checks: a cost `c` fits budget `b` iff `c <= b + BUDGET_EPS`.
pub const BUDGET_EPS: f64 = 1e-9;

#[inline]
pub fn fits_budget(cost: f64, budget: f64) -> bool {
    cost <= budget + BUDGET_EPS
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WorkerId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TaskId(pub u32);

impl WorkerId {
    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl TaskId {
    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for WorkerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}", self.0)
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn euclidean(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkillFee {
    pub skill: SkillId,
    pub fee: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Worker {
    pub id: WorkerId,
    pub location: Point,
    pub skills: Vec<SkillFee>,
}

impl Worker {
    pub fn new(id: u32, location: Point, skills: impl IntoIterator<Item = (u32, f64)>) -> Self {
        Self {
            id: WorkerId(id),
            location,
            skills: skills
                .into_iter()
                .map(|(s, fee)| SkillFee {
                    skill: SkillId(s),
                    fee,
                })
                .collect(),
        }
    }

    /// Fee this worker charges for `skill`, if it has the skill.
    pub fn fee(&self, skill: SkillId) -> Option<f64> {
        self.skills.iter().find(|sf| sf.skill == skill).map(|sf| sf.fee)
    }

    pub fn has_skill(&self, skill: SkillId) -> bool {
        self.skills.iter().any(|sf| sf.skill == skill)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub id: TaskId,
    pub location: Point,
    pub required: SkillSet,
    pub budget: f64,
}

impl Task {
    pub fn new(id: u32, location: Point, required: impl IntoIterator<Item = u32>, budget: f64) -> Self {
        Self {
            id: TaskId(id),
            location,
            required: required.into_iter().map(SkillId).collect(),
            budget,
        }
    }

    /// Budget per required skill, the ordering key of the average-budget heuristic.
    pub fn average_budget(&self) -> f64 {
        self.budget / self.required.len() as f64
    }
}

/// Dense `|W| x |T|` distance table replacing Euclidean distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Row-major data, one row per worker.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, ModelError> {
        if data.len() != rows * cols {
            return Err(invalid(
                "distances",
                format!(
                    "expected {rows}x{cols} = {} entries, found {}",
                    rows * cols,
                    data.len()
                ),
            ));
        }
        if let Some(i) = data.iter().position(|d| !d.is_finite() || *d < 0.0) {
            return Err(invalid(
                format!("distances[{}][{}]", i / cols.max(1), i % cols.max(1)),
                "distance must be finite and non-negative",
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != m) {
            return Err(invalid(
                format!("distances[{i}]"),
                format!("expected {m} columns"),
            ));
        }
        Self::new(n, m, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, worker: usize, task: usize) -> f64 {
        self.data[worker * self.cols + task]
    }

    pub fn row(&self, worker: usize) -> &[f64] {
        &self.data[worker * self.cols..(worker + 1) * self.cols]
    }
}

fn invalid(location: impl Into<String>, message: impl Into<String>) -> ModelError {
    ModelError::InvalidInstance {
        location: location.into(),
        message: message.into(),
    }
}

/// A validated problem instance. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    skill_count: u32,
    gamma: f64,
    workers: Vec<Worker>,
    tasks: Vec<Task>,
    distances: Option<DistanceMatrix>,
}

impl Instance {
    /// Checks every structural invariant: contiguous 0-based ids (workers and
    /// tasks are stored in id order), skill ids inside the universe, distinct
    /// skills per worker, finite non-negative money, non-empty requirements
    /// and a correctly shaped distance override.
    pub fn new(
        skill_count: u32,
        gamma: f64,
        workers: Vec<Worker>,
        tasks: Vec<Task>,
        distances: Option<DistanceMatrix>,
    ) -> Result<Self, ModelError> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(invalid("gamma", "must be finite and non-negative"));
        }
        let in_universe = |s: SkillId| s.0 < skill_count;
        for (i, w) in workers.iter().enumerate() {
            if w.id.index() != i {
                return Err(invalid(
                    format!("workers[{i}].id"),
                    format!("expected id {i}, found {}", w.id.0),
                ));
            }
            if !(w.location.x.is_finite() && w.location.y.is_finite()) {
                return Err(invalid(format!("workers[{i}]"), "location must be finite"));
            }
            for (j, sf) in w.skills.iter().enumerate() {
                let at = format!("workers[{i}].skills[{j}]");
                if !in_universe(sf.skill) {
                    return Err(invalid(
                        at,
                        format!("skill {} outside universe of {skill_count}", sf.skill.0),
                    ));
                }
                if !sf.fee.is_finite() || sf.fee < 0.0 {
                    return Err(invalid(at, "fee must be finite and non-negative"));
                }
                if w.skills[..j].iter().any(|o| o.skill == sf.skill) {
                    return Err(invalid(at, format!("duplicate skill {}", sf.skill.0)));
                }
            }
        }
        for (i, t) in tasks.iter().enumerate() {
            if t.id.index() != i {
                return Err(invalid(
                    format!("tasks[{i}].id"),
                    format!("expected id {i}, found {}", t.id.0),
                ));
            }
            if !(t.location.x.is_finite() && t.location.y.is_finite()) {
                return Err(invalid(format!("tasks[{i}]"), "location must be finite"));
            }
            if t.required.is_empty() {
                return Err(invalid(format!("tasks[{i}].required"), "must not be empty"));
            }
            if let Some(s) = t.required.iter().find(|s| !in_universe(**s)) {
                return Err(invalid(
                    format!("tasks[{i}].required"),
                    format!("skill {} outside universe of {skill_count}", s.0),
                ));
            }
            if !t.budget.is_finite() || t.budget < 0.0 {
                return Err(invalid(
                    format!("tasks[{i}].budget"),
                    "must be finite and non-negative",
                ));
            }
        }
        if let Some(d) = &distances {
            if d.rows() != workers.len() || d.cols() != tasks.len() {
                return Err(invalid(
                    "distances",
                    format!(
                        "expected {}x{}, found {}x{}",
                        workers.len(),
                        tasks.len(),
                        d.rows(),
                        d.cols()
                    ),
                ));
            }
        }
        Ok(Self {
            skill_count,
            gamma,
            workers,
            tasks,
            distances,
        })
    }

    pub fn skill_count(&self) -> u32 {
        self.skill_count
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn workers(&self) -> &[Worker] {
        &self.workers
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn distance_override(&self) -> Option<&DistanceMatrix> {
        self.distances.as_ref()
    }

    pub fn worker(&self, id: WorkerId) -> Result<&Worker, ModelError> {
        self.workers.get(id.index()).ok_or(ModelError::UnknownWorker(id))
    }

    pub fn task(&self, id: TaskId) -> Result<&Task, ModelError> {
        self.tasks.get(id.index()).ok_or(ModelError::UnknownTask(id))
    }

    /// Override entry when present, Euclidean distance otherwise.
    pub fn distance(&self, worker: WorkerId, task: TaskId) -> Result<f64, ModelError> {
        self.worker(worker)?;
        self.task(task)?;
        Ok(self.dist(worker.index(), task.index()))
    }

    #[inline]
    pub(crate) fn dist(&self, worker: usize, task: usize) -> f64 {
        match &self.distances {
            Some(m) => m.get(worker, task),
            None => self.workers[worker].location.euclidean(self.tasks[task].location),
        }
    }

    #[inline]
    pub(crate) fn transport_fee(&self, worker: usize, task: usize) -> f64 {
        self.gamma * self.dist(worker, task)
    }

    /// `gamma * distance + sum of the worker's fees for used`.
    pub fn worker_reward(&self, worker: WorkerId, task: TaskId, used: &SkillSet) -> Result<f64, ModelError> {
        let (transport, labor) = self.reward_parts(worker, task, used)?;
        Ok(transport + labor)
    }

    /// Transport and labor components of a worker's reward.
    pub fn reward_parts(
        &self,
        worker: WorkerId,
        task: TaskId,
        used: &SkillSet,
    ) -> Result<(f64, f64), ModelError> {
        let w = self.worker(worker)?;
        self.task(task)?;
        if used.is_empty() {
            return Err(ModelError::EmptySkillSet(worker));
        }
        let mut labor = 0.0;
        for &s in used {
            labor += w.fee(s).ok_or(ModelError::SkillNotOwned { worker, skill: s })?;
        }
        Ok((self.transport_fee(worker.index(), task.index()), labor))
    }

    /// Builds the contract for `worker` exercising `used` on `task`.
    pub fn contract(&self, worker: WorkerId, task: TaskId, used: SkillSet) -> Result<Contract, ModelError> {
        let (transport_fee, labor_fee) = self.reward_parts(worker, task, &used)?;
        Ok(Contract {
            worker,
            task,
            used_skills: used,
            transport_fee,
            labor_fee,
        })
    }

    /// Utility of `task` under `assignment`: budget minus rewards paid when
    /// completed, zero otherwise.
    pub fn task_utility(&self, assignment: &Assignment, task: TaskId) -> Result<f64, ModelError> {
        let t = self.task(task)?;
        if !assignment.completed.contains(&task) {
            return Ok(0.0);
        }
        let paid: f64 = assignment
            .contracts
            .iter()
            .filter(|c| c.task == task)
            .map(Contract::reward)
            .sum();
        Ok(t.budget - paid)
    }

    pub fn total_utility(&self, assignment: &Assignment) -> f64 {
        self.tasks
            .iter()
            .map(|t| self.task_utility(assignment, t.id).unwrap_or(0.0))
            .sum()
    }

    /// Rough heap footprint, used by the benchmark memory estimate.
    pub fn heap_bytes(&self) -> usize {
        use std::mem::size_of;
        let workers: usize = self
            .workers
            .iter()
            .map(|w| size_of::<Worker>() + w.skills.capacity() * size_of::<SkillFee>())
            .sum();
        let tasks: usize = self
            .tasks
            .iter()
            .map(|t| size_of::<Task>() + t.required.heap_bytes())
            .sum();
        let dist = self
            .distances
            .as_ref()
            .map_or(0, |d| d.data.capacity() * size_of::<f64>());
        workers + tasks + dist
    }
}

/// One worker hired for one task, with its reward split into components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contract {
    pub worker: WorkerId,
    pub task: TaskId,
    pub used_skills: SkillSet,
    pub transport_fee: f64,
    pub labor_fee: f64,
}

impl Contract {
    #[inline]
    pub fn reward(&self) -> f64 {
        self.transport_fee + self.labor_fee
    }
}

/// Contracts in the order they were made, plus the set of completed tasks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub contracts: Vec<Contract>,
    pub completed: BTreeSet<TaskId>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contracts_for(&self, task: TaskId) -> impl Iterator<Item = &Contract> + '_ {
        self.contracts.iter().filter(move |c| c.task == task)
    }

    pub fn completed_count(&self) -> usize {
        self.completed.len()
    }

    /// Records a fully covered task and its contracts.
    pub fn push_completed(&mut self, task: TaskId, contracts: Vec<Contract>) {
        debug_assert!(contracts.iter().all(|c| c.task == task));
        self.completed.insert(task);
        self.contracts.extend(contracts);
    }
}
