//! Greedy heuristics: tasks are visited in budget order and each is covered
//! set-cover style, always hiring the worker whose reward per newly covered
//! skill is smallest.

use std::cmp::Ordering;
use std::mem::size_of;

use serde::{Deserialize, Serialize};

use crate::model::{fits_budget, Assignment, Contract, Instance, TaskId, Worker, WorkerId};
use crate::skills::{SkillId, SkillSet};

/// A worker's best offer for the still uncovered skills of a task.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub worker: WorkerId,
    pub subset: SkillSet,
    /// Reward divided by `subset.len()`.
    pub ratio: f64,
    pub transport_fee: f64,
    pub labor_fee: f64,
}

impl Candidate {
    #[inline]
    pub fn reward(&self) -> f64 {
        self.transport_fee + self.labor_fee
    }

    fn into_contract(self, task: TaskId) -> Contract {
        Contract {
            worker: self.worker,
            task,
            used_skills: self.subset,
            transport_fee: self.transport_fee,
            labor_fee: self.labor_fee,
        }
    }
}

/// How a worker's skill subset is chosen for a task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetRule {
    /// Subset minimizing reward per covered skill.
    #[default]
    RatioOptimal,
    /// Every uncovered required skill the worker owns. This is the rule the
    /// worked traces of the original TBA description follow; it is kept for
    /// comparison and is not used by [`solve_tba`] or [`solve_aba`].
    AllRelevant,
}

/// Order in which tasks are offered workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskOrder {
    /// Descending budget (TBA).
    TotalBudget,
    /// Descending budget per required skill (ABA).
    AverageBudget,
}

/// Workers still available for hiring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkerPool {
    available: Vec<bool>,
    len: usize,
}

impl WorkerPool {
    /// Pool holding every worker of the instance.
    pub fn full(instance: &Instance) -> Self {
        let n = instance.workers().len();
        Self {
            available: vec![true; n],
            len: n,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, worker: WorkerId) -> bool {
        self.available.get(worker.index()).copied().unwrap_or(false)
    }

    /// Removes a worker; returns whether it was present.
    pub fn take(&mut self, worker: WorkerId) -> bool {
        match self.available.get_mut(worker.index()) {
            Some(slot @ true) => {
                *slot = false;
                self.len -= 1;
                true
            }
            _ => false,
        }
    }

    /// Returns a worker to the pool; returns whether it was absent.
    pub fn restore(&mut self, worker: WorkerId) -> bool {
        match self.available.get_mut(worker.index()) {
            Some(slot @ false) => {
                *slot = true;
                self.len += 1;
                true
            }
            _ => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = WorkerId> + '_ {
        self.available
            .iter()
            .enumerate()
            .filter(|(_, a)| **a)
            .map(|(i, _)| WorkerId(i as u32))
    }

    fn heap_bytes(&self) -> usize {
        self.available.capacity()
    }
}

/// Ratio-optimal subset of `worker`'s skills among `remaining`.
///
/// For a fixed subset size `k` the cheapest `k` relevant fees minimize the
/// reward, so only the fee-sorted prefixes need to be scored. Returns `None`
/// when the worker owns none of `remaining` or an id is out of range.
pub fn best_subset_for_worker(
    instance: &Instance,
    worker: WorkerId,
    task: TaskId,
    remaining: &SkillSet,
) -> Option<Candidate> {
    let w = instance.worker(worker).ok()?;
    instance.task(task).ok()?;
    let mut scratch = Vec::new();
    candidate(
        instance,
        w,
        task,
        remaining,
        SubsetRule::RatioOptimal,
        &mut scratch,
    )
}

pub(crate) fn candidate(
    instance: &Instance,
    worker: &Worker,
    task: TaskId,
    remaining: &SkillSet,
    rule: SubsetRule,
    scratch: &mut Vec<(f64, SkillId)>,
) -> Option<Candidate> {
    let s = score(instance, worker, task, remaining, rule, scratch)?;
    Some(s.into_candidate(worker.id, scratch))
}

/// Allocation-free part of [`candidate`]; leaves the chosen skills as the
/// first `k` entries of `scratch`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Score {
    k: usize,
    transport: f64,
    labor: f64,
    ratio: f64,
}

impl Score {
    #[inline]
    pub(crate) fn reward(&self) -> f64 {
        self.transport + self.labor
    }

    pub(crate) fn into_candidate(self, worker: WorkerId, scratch: &[(f64, SkillId)]) -> Candidate {
        Candidate {
            worker,
            subset: prefix_set(scratch, self.k),
            ratio: self.ratio,
            transport_fee: self.transport,
            labor_fee: self.labor,
        }
    }
}

pub(crate) fn score(
    instance: &Instance,
    worker: &Worker,
    task: TaskId,
    remaining: &SkillSet,
    rule: SubsetRule,
    scratch: &mut Vec<(f64, SkillId)>,
) -> Option<Score> {
    scratch.clear();
    scratch.extend(
        worker
            .skills
            .iter()
            .filter(|sf| remaining.contains(sf.skill))
            .map(|sf| (sf.fee, sf.skill)),
    );
    if scratch.is_empty() {
        return None;
    }
    let transport = instance.transport_fee(worker.id.index(), task.index());

    let (k, labor) = match rule {
        SubsetRule::AllRelevant => (scratch.len(), scratch.iter().map(|(f, _)| f).sum()),
        SubsetRule::RatioOptimal => {
            scratch.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut best_k = 1;
            let mut best_labor = scratch[0].0;
            let mut best_ratio = transport + best_labor;
            let mut labor = best_labor;
            for k in 2..=scratch.len() {
                labor += scratch[k - 1].0;
                let ratio = (transport + labor) / k as f64;
                let better = match ratio.total_cmp(&best_ratio) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => prefix_set(scratch, k) < prefix_set(scratch, best_k),
                };
                if better {
                    best_k = k;
                    best_labor = labor;
                    best_ratio = ratio;
                }
            }
            (best_k, best_labor)
        }
    };
    Some(Score {
        k,
        transport,
        labor,
        ratio: (transport + labor) / k as f64,
    })
}

fn prefix_set(sorted: &[(f64, SkillId)], k: usize) -> SkillSet {
    sorted[..k].iter().map(|(_, s)| *s).collect()
}

/// Counter of bytes held by solver-owned structures; tracks the peak.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct MemoryMeter {
    current: usize,
    peak: usize,
}

impl MemoryMeter {
    pub(crate) fn alloc(&mut self, bytes: usize) {
        self.current += bytes;
        self.peak = self.peak.max(self.current);
    }

    pub(crate) fn free(&mut self, bytes: usize) {
        self.current = self.current.saturating_sub(bytes);
    }

    pub(crate) fn peak(&self) -> usize {
        self.peak
    }
}

/// Covers one task greedily from `pool`.
///
/// Each step hires the ratio-minimal candidate whose reward still fits the
/// task budget; candidates that would overrun are skipped. Returns the
/// contracts in hiring order once every required skill is covered. When no
/// affordable candidate can extend coverage, every tentatively hired worker
/// goes back to the pool and `None` is returned.
pub fn greedy_cover_task(instance: &Instance, task: TaskId, pool: &mut WorkerPool) -> Option<Vec<Contract>> {
    let mut meter = MemoryMeter::default();
    cover_task(instance, task, pool, SubsetRule::RatioOptimal, &mut meter)
}

pub(crate) fn cover_task(
    instance: &Instance,
    task: TaskId,
    pool: &mut WorkerPool,
    rule: SubsetRule,
    meter: &mut MemoryMeter,
) -> Option<Vec<Contract>> {
    let t = instance.task(task).ok()?;
    let mut remaining = t.required.clone();
    let mut spent = 0.0;
    let mut hired: Vec<Contract> = Vec::with_capacity(remaining.len());
    let mut scratch = Vec::new();
    let base = remaining.heap_bytes() + hired.capacity() * size_of::<Contract>();
    meter.alloc(base);

    while !remaining.is_empty() {
        // Workers are scanned in id order, so a strictly smaller ratio is the
        // whole tie-break: each worker offers exactly one subset.
        let mut best: Option<Candidate> = None;
        for w in instance.workers() {
            if !pool.contains(w.id) {
                continue;
            }
            let Some(s) = score(instance, w, task, &remaining, rule, &mut scratch) else {
                continue;
            };
            if !fits_budget(spent + s.reward(), t.budget) {
                continue;
            }
            if best.as_ref().is_none_or(|b| s.ratio < b.ratio) {
                best = Some(s.into_candidate(w.id, &scratch));
            }
        }
        let Some(chosen) = best else {
            for c in &hired {
                pool.restore(c.worker);
                meter.free(c.used_skills.heap_bytes());
            }
            meter.free(base);
            return None;
        };
        pool.take(chosen.worker);
        remaining.subtract(&chosen.subset);
        spent += chosen.reward();
        meter.alloc(chosen.subset.heap_bytes());
        hired.push(chosen.into_contract(task));
    }
    meter.free(base);
    Some(hired)
}

/// Tasks sorted by descending key, ties by ascending id.
pub fn task_order(instance: &Instance, order: TaskOrder) -> Vec<TaskId> {
    let key = |id: &TaskId| {
        let t = &instance.tasks()[id.index()];
        match order {
            TaskOrder::TotalBudget => t.budget,
            TaskOrder::AverageBudget => t.average_budget(),
        }
    };
    let mut ids: Vec<TaskId> = instance.tasks().iter().map(|t| t.id).collect();
    ids.sort_by(|a, b| key(b).total_cmp(&key(a)).then(a.cmp(b)));
    ids
}

/// Outcome of one task visit, in visiting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TaskAttempt {
    pub task: TaskId,
    pub completed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub assignment: Assignment,
    pub attempts: Vec<TaskAttempt>,
    /// Peak bytes held by the solver's own structures.
    pub peak_bytes: usize,
}

/// Configurable greedy solver; [`GreedySolver::TBA`] and [`GreedySolver::ABA`]
/// are the two standard heuristics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedySolver {
    pub order: TaskOrder,
    pub rule: SubsetRule,
}

impl GreedySolver {
    pub const TBA: GreedySolver = GreedySolver {
        order: TaskOrder::TotalBudget,
        rule: SubsetRule::RatioOptimal,
    };
    pub const ABA: GreedySolver = GreedySolver {
        order: TaskOrder::AverageBudget,
        rule: SubsetRule::RatioOptimal,
    };

    pub fn solve(&self, instance: &Instance) -> SolveReport {
        let mut meter = MemoryMeter::default();
        let mut pool = WorkerPool::full(instance);
        let order = task_order(instance, self.order);
        meter.alloc(pool.heap_bytes() + order.capacity() * size_of::<TaskId>());

        let mut assignment = Assignment::new();
        let mut attempts = Vec::with_capacity(order.len());
        for &task in &order {
            let covered = cover_task(instance, task, &mut pool, self.rule, &mut meter);
            attempts.push(TaskAttempt {
                task,
                completed: covered.is_some(),
            });
            if let Some(contracts) = covered {
                meter.alloc(size_of::<TaskId>() * 2);
                // Contract skill sets were already counted while hiring.
                meter.alloc(contracts.len() * size_of::<Contract>());
                assignment.push_completed(task, contracts);
            }
        }
        SolveReport {
            assignment,
            attempts,
            peak_bytes: meter.peak(),
        }
    }
}

/// Total-budget heuristic: tasks by descending budget.
pub fn solve_tba(instance: &Instance) -> Assignment {
    GreedySolver::TBA.solve(instance).assignment
}

/// Average-budget heuristic: tasks by descending budget per required skill.
pub fn solve_aba(instance: &Instance) -> Assignment {
    GreedySolver::ABA.solve(instance).assignment
}
