//! Exact optimum for small instances, and the random baseline.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::model::{fits_budget, Assignment, Contract, Instance, TaskId, WorkerId};
use crate::skills::SkillSet;
use crate::solver::{score, MemoryMeter, SolveReport, SubsetRule, TaskAttempt, WorkerPool};

const ENUMERATION_BUDGET: f64 = 1e8;

/// Largest instance the exact solver agrees to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingBound {
    pub max_workers: usize,
    pub max_tasks: usize,
}

impl MappingBound {
    /// Fails when `(max_tasks + 1)^max_workers` exceeds 1e8 mappings.
    pub fn new(max_workers: usize, max_tasks: usize) -> Result<Self, OracleError> {
        let mappings = (max_tasks as f64 + 1.0).powf(max_workers as f64);
        if mappings > ENUMERATION_BUDGET {
            return Err(OracleError::BoundTooLarge {
                max_workers,
                max_tasks,
            });
        }
        Ok(Self {
            max_workers,
            max_tasks,
        })
    }
}

impl Default for MappingBound {
    /// Eight workers and three tasks: 65 536 mappings.
    fn default() -> Self {
        Self {
            max_workers: 8,
            max_tasks: 3,
        }
    }
}

/// Per-task evaluation of one mapping.
struct TaskPlan {
    completed: bool,
    utility: f64,
}

/// Cheapest labor allocation for the workers mapped to `task`: every required
/// skill goes to the lowest-fee mapped worker offering it (lower id on ties),
/// and every mapped worker pays transport. Returns `None` when some skill is
/// not offered at all.
///
/// Fills `provider` with the worker index chosen for each required skill.
fn plan_task(instance: &Instance, task: usize, mapped: &[usize], provider: &mut Vec<usize>) -> Option<f64> {
    let t = &instance.tasks()[task];
    provider.clear();
    let mut cost: f64 = mapped.iter().map(|&w| instance.transport_fee(w, task)).sum();
    for &skill in &t.required {
        let mut best: Option<(f64, usize)> = None;
        for &w in mapped {
            if let Some(fee) = instance.workers()[w].fee(skill) {
                if best.is_none_or(|(b, _)| fee < b) {
                    best = Some((fee, w));
                }
            }
        }
        let (fee, w) = best?;
        cost += fee;
        provider.push(w);
    }
    Some(cost)
}

/// Cost of covering `task` with exactly the `mapped` workers under the
/// cheapest-provider rule used by [`exact_optimal`]; `None` when some
/// required skill is not offered.
pub fn mapped_task_cost(instance: &Instance, task: TaskId, mapped: &[WorkerId]) -> Option<f64> {
    instance.task(task).ok()?;
    let mut idx: Vec<usize> = mapped.iter().map(|w| w.index()).collect();
    if idx.iter().any(|&w| w >= instance.workers().len()) {
        return None;
    }
    idx.sort_unstable();
    idx.dedup();
    plan_task(instance, task.index(), &idx, &mut Vec::new())
}

/// Digit `0` means unassigned, digit `k` means task `k - 1`; mappings are
/// compared lexicographically on this encoding.
fn evaluate(
    instance: &Instance,
    mapping: &[u8],
    buckets: &mut [Vec<usize>],
    provider: &mut Vec<usize>,
) -> f64 {
    for b in buckets.iter_mut() {
        b.clear();
    }
    for (w, &d) in mapping.iter().enumerate() {
        if d > 0 {
            buckets[d as usize - 1].push(w);
        }
    }
    let mut total = 0.0;
    for (task, mapped) in buckets.iter().enumerate() {
        if mapped.is_empty() {
            continue;
        }
        if let Some(plan) = task_plan(instance, task, mapped, provider) {
            if plan.completed {
                total += plan.utility;
            }
        }
    }
    total
}

fn task_plan(
    instance: &Instance,
    task: usize,
    mapped: &[usize],
    provider: &mut Vec<usize>,
) -> Option<TaskPlan> {
    let cost = plan_task(instance, task, mapped, provider)?;
    let budget = instance.tasks()[task].budget;
    Some(TaskPlan {
        completed: fits_budget(cost, budget),
        utility: budget - cost,
    })
}

/// Advances `digits` (base `radix`, most significant first) within
/// `digits[fixed..]`; returns false after the last value.
fn next_mapping(digits: &mut [u8], fixed: usize, radix: u8) -> bool {
    for i in (fixed..digits.len()).rev() {
        if digits[i] + 1 < radix {
            digits[i] += 1;
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Best mapping whose first worker is fixed to `first` (or the only mapping
/// when there are no workers). Earlier mappings win ties.
fn best_with_prefix(instance: &Instance, first: Option<u8>, radix: u8) -> (f64, Vec<u8>) {
    let n = instance.workers().len();
    let mut digits = vec![0u8; n];
    let fixed = match first {
        Some(d) => {
            digits[0] = d;
            1
        }
        None => 0,
    };
    let mut buckets = vec![Vec::new(); instance.tasks().len()];
    let mut provider = Vec::new();
    let mut best = (
        evaluate(instance, &digits, &mut buckets, &mut provider),
        digits.clone(),
    );
    while next_mapping(&mut digits, fixed, radix) {
        let u = evaluate(instance, &digits, &mut buckets, &mut provider);
        if u > best.0 {
            best = (u, digits.clone());
        }
    }
    best
}

fn assignment_from_mapping(instance: &Instance, mapping: &[u8]) -> Assignment {
    let mut buckets = vec![Vec::new(); instance.tasks().len()];
    for (w, &d) in mapping.iter().enumerate() {
        if d > 0 {
            buckets[d as usize - 1].push(w);
        }
    }
    let mut assignment = Assignment::new();
    let mut provider = Vec::new();
    for (task, mapped) in buckets.iter().enumerate() {
        if mapped.is_empty() {
            continue;
        }
        let Some(plan) = task_plan(instance, task, mapped, &mut provider) else {
            continue;
        };
        if !plan.completed {
            continue;
        }
        let t = &instance.tasks()[task];
        let contracts = mapped
            .iter()
            .filter_map(|&w| {
                let used: SkillSet = t
                    .required
                    .iter()
                    .zip(&provider)
                    .filter(|(_, &p)| p == w)
                    .map(|(s, _)| *s)
                    .collect();
                // A mapped worker providing nothing only adds transport; an
                // optimal mapping never keeps one unless its transport is zero.
                (!used.is_empty()).then(|| {
                    instance
                        .contract(WorkerId(w as u32), t.id, used)
                        .expect("skills come from the worker's own list")
                })
            })
            .collect::<Vec<Contract>>();
        assignment.push_completed(t.id, contracts);
    }
    assignment
}

/// Exact optimum by enumerating every worker-to-task mapping.
///
/// For a fixed mapping each task's labor is the cheapest provider per
/// required skill, so the only exponential factor is `(|T|+1)^|W|`. Ties go
/// to the lexicographically smallest mapping, with "unassigned" sorting
/// before any task. The search is split over the first worker's choice and
/// run in parallel.
pub fn exact_optimal(instance: &Instance, bound: MappingBound) -> Result<Assignment, OracleError> {
    let (nw, nt) = (instance.workers().len(), instance.tasks().len());
    if nw > bound.max_workers || nt > bound.max_tasks {
        return Err(OracleError::TooLarge {
            workers: nw,
            tasks: nt,
            max_workers: bound.max_workers,
            max_tasks: bound.max_tasks,
        });
    }
    // Bounds built by hand may skip `MappingBound::new`.
    if (nt as f64 + 1.0).powf(nw as f64) > ENUMERATION_BUDGET || nt >= u8::MAX as usize {
        return Err(OracleError::BoundTooLarge {
            max_workers: nw,
            max_tasks: nt,
        });
    }
    let radix = nt as u8 + 1;
    let best = if nw == 0 {
        best_with_prefix(instance, None, radix)
    } else {
        (0..radix)
            .into_par_iter()
            .map(|d| best_with_prefix(instance, Some(d), radix))
            .collect::<Vec<_>>()
            .into_iter()
            .reduce(|a, b| if b.0 > a.0 { b } else { a })
            .expect("radix is at least one")
    };
    Ok(assignment_from_mapping(instance, &best.1))
}

/// Random baseline: tasks in shuffled order; each hires uniformly random
/// pool workers that own an uncovered skill and fit the remaining budget,
/// each exercising its ratio-optimal subset. A task that runs out of such
/// workers is rolled back. Deterministic for a given seed.
pub fn solve_random(instance: &Instance, seed: u64) -> Assignment {
    solve_random_report(instance, seed).assignment
}

pub fn solve_random_report(instance: &Instance, seed: u64) -> SolveReport {
    use std::mem::size_of;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut meter = MemoryMeter::default();
    let mut pool = WorkerPool::full(instance);
    let mut order: Vec<TaskId> = instance.tasks().iter().map(|t| t.id).collect();
    order.shuffle(&mut rng);
    meter.alloc(instance.workers().len() + order.capacity() * size_of::<TaskId>());

    let mut assignment = Assignment::new();
    let mut attempts = Vec::with_capacity(order.len());
    let mut scratch = Vec::new();
    let mut eligible: Vec<WorkerId> = Vec::new();
    meter.alloc(instance.workers().len() * size_of::<WorkerId>());

    for &task in &order {
        let t = &instance.tasks()[task.index()];
        let mut remaining = t.required.clone();
        let mut spent = 0.0;
        let mut hired: Vec<Contract> = Vec::new();
        while !remaining.is_empty() {
            eligible.clear();
            for w in instance.workers() {
                if !pool.contains(w.id) {
                    continue;
                }
                if let Some(s) = score(
                    instance,
                    w,
                    task,
                    &remaining,
                    SubsetRule::RatioOptimal,
                    &mut scratch,
                ) {
                    if fits_budget(spent + s.reward(), t.budget) {
                        eligible.push(w.id);
                    }
                }
            }
            if eligible.is_empty() {
                break;
            }
            let pick = eligible[rng.random_range(0..eligible.len())];
            let w = &instance.workers()[pick.index()];
            let s = score(
                instance,
                w,
                task,
                &remaining,
                SubsetRule::RatioOptimal,
                &mut scratch,
            )
            .expect("eligible workers have a candidate");
            let c = s.into_candidate(pick, &scratch);
            pool.take(pick);
            remaining.subtract(&c.subset);
            spent += c.reward();
            meter.alloc(size_of::<Contract>() + c.subset.len() * 4);
            hired.push(Contract {
                worker: c.worker,
                task,
                used_skills: c.subset,
                transport_fee: c.transport_fee,
                labor_fee: c.labor_fee,
            });
        }
        let completed = remaining.is_empty();
        attempts.push(TaskAttempt { task, completed });
        if completed {
            assignment.push_completed(task, hired);
        } else {
            for c in &hired {
                pool.restore(c.worker);
                meter.free(size_of::<Contract>() + c.used_skills.len() * 4);
            }
        }
    }
    SolveReport {
        assignment,
        attempts,
        peak_bytes: meter.peak(),
    }
}
