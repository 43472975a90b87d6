//! Brute-force references and random small instances for tests.
//!
//! Nothing here shares code with the solvers it is used to check: subsets,
//! skill allocations and whole assignments are enumerated directly from the
//! model definitions.

use rand::Rng;

use crate::model::{fits_budget, Instance, Point, Task, TaskId, Worker, WorkerId};
use crate::skills::{SkillId, SkillSet};

/// Shape of a random small instance.
#[derive(Debug, Clone, Copy)]
pub struct SmallLimits {
    pub max_workers: u32,
    pub max_tasks: u32,
    pub max_skills: u32,
    pub max_skills_per_worker: u32,
    /// Integer fees and coordinates make exact ratio ties common.
    pub integer_money: bool,
}

impl Default for SmallLimits {
    fn default() -> Self {
        Self {
            max_workers: 7,
            max_tasks: 3,
            max_skills: 5,
            max_skills_per_worker: 3,
            integer_money: false,
        }
    }
}

fn money(rng: &mut impl Rng, lo: f64, hi: f64, integer: bool) -> f64 {
    if integer {
        rng.random_range(lo as i64..=hi as i64) as f64
    } else {
        rng.random_range(lo..hi)
    }
}

fn some_skills(rng: &mut impl Rng, universe: u32, max: u32) -> Vec<u32> {
    let k = rng.random_range(1..=max.min(universe));
    rand::seq::index::sample(rng, universe as usize, k as usize)
        .into_iter()
        .map(|i| i as u32)
        .collect()
}

pub fn random_small_instance(rng: &mut impl Rng, limits: SmallLimits) -> Instance {
    let n_skills = rng.random_range(1..=limits.max_skills);
    let n_workers = rng.random_range(0..=limits.max_workers);
    let n_tasks = rng.random_range(1..=limits.max_tasks);
    let int = limits.integer_money;
    let gamma = if rng.random_bool(0.2) {
        0.0
    } else {
        money(rng, 0.0, 1.0, false)
    };
    let point = |rng: &mut _| Point::new(money(rng, 0.0, 10.0, int), money(rng, 0.0, 10.0, int));
    let workers = (0..n_workers)
        .map(|i| {
            let location = point(rng);
            let skills: Vec<(u32, f64)> = some_skills(rng, n_skills, limits.max_skills_per_worker)
                .into_iter()
                .map(|s| (s, money(rng, 0.0, 10.0, int)))
                .collect();
            Worker::new(i, location, skills)
        })
        .collect();
    let tasks = (0..n_tasks)
        .map(|i| {
            let location = point(rng);
            let required = some_skills(rng, n_skills, n_skills.min(4));
            let budget = money(rng, 0.0, 40.0, int);
            Task::new(i, location, required, budget)
        })
        .collect();
    Instance::new(n_skills, gamma, workers, tasks, None).expect("generated instance is valid")
}

/// Ratio-optimal subset by enumerating all `2^|S_w|` subsets of the worker's
/// skills, scoring each as reward over the number of `remaining` skills it
/// covers. Among subsets reaching the minimum ratio, returns the
/// lexicographically smallest one that lies inside `remaining`.
pub fn exhaustive_best_subset(
    instance: &Instance,
    worker: WorkerId,
    task: TaskId,
    remaining: &SkillSet,
) -> Option<(SkillSet, f64)> {
    let w = &instance.workers()[worker.index()];
    let transport = instance.gamma() * instance.distance(worker, task).ok()?;
    let n = w.skills.len();
    let mut scored: Vec<(f64, SkillSet, bool)> = Vec::new();
    for mask in 1u32..(1 << n) {
        let chosen: Vec<_> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| w.skills[i])
            .collect();
        let covered = chosen.iter().filter(|sf| remaining.contains(sf.skill)).count();
        if covered == 0 {
            continue;
        }
        let fees: f64 = chosen.iter().map(|sf| sf.fee).sum();
        let inside = chosen.len() == covered;
        let set: SkillSet = chosen.iter().map(|sf| sf.skill).collect();
        scored.push(((transport + fees) / covered as f64, set, inside));
    }
    let best = scored.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return None;
    }
    scored
        .into_iter()
        .filter(|(r, _, inside)| *r == best && *inside)
        .map(|(r, set, _)| (set, r))
        .min_by(|a, b| a.0.cmp(&b.0))
}

/// Cheapest way for exactly the `mapped` workers to cover `task`: every
/// mapped worker pays transport, and each required skill is given to one
/// mapped worker owning it, trying every such allocation.
pub fn exhaustive_allocation_cost(instance: &Instance, task: TaskId, mapped: &[WorkerId]) -> Option<f64> {
    let t = &instance.tasks()[task.index()];
    let transport: f64 = mapped
        .iter()
        .map(|&w| instance.gamma() * instance.distance(w, task).unwrap())
        .sum();
    let options: Vec<Vec<f64>> = t
        .required
        .iter()
        .map(|&s| {
            mapped
                .iter()
                .filter_map(|&w| instance.workers()[w.index()].fee(s))
                .collect()
        })
        .collect();
    if options.iter().any(Vec::is_empty) {
        return None;
    }
    let mut best = f64::INFINITY;
    let mut idx = vec![0usize; options.len()];
    loop {
        let labor: f64 = idx.iter().zip(&options).map(|(&i, o)| o[i]).sum();
        best = best.min(transport + labor);
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Some(best);
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Optimal total utility by enumerating, for every worker, either no
/// contract or a (task, non-empty subset of its skills the task requires)
/// contract. Exponential in everything; keep instances tiny.
pub fn brute_force_optimum(instance: &Instance) -> f64 {
    #[derive(Clone)]
    struct Option_ {
        task: usize,
        skills: SkillSet,
        reward: f64,
    }
    let mut per_worker: Vec<Vec<Option_>> = Vec::new();
    for w in instance.workers() {
        let mut opts = Vec::new();
        for t in instance.tasks() {
            let relevant: Vec<_> = w
                .skills
                .iter()
                .filter(|sf| t.required.contains(sf.skill))
                .collect();
            let transport = instance.gamma() * instance.distance(w.id, t.id).unwrap();
            for mask in 1u32..(1 << relevant.len()) {
                let chosen: Vec<_> = (0..relevant.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| relevant[i])
                    .collect();
                opts.push(Option_ {
                    task: t.id.index(),
                    skills: chosen.iter().map(|sf| sf.skill).collect::<Vec<SkillId>>().into(),
                    reward: transport + chosen.iter().map(|sf| sf.fee).sum::<f64>(),
                });
            }
        }
        per_worker.push(opts);
    }

    fn recurse(
        instance: &Instance,
        per_worker: &[Vec<Option_>],
        w: usize,
        covered: &mut Vec<SkillSet>,
        cost: &mut Vec<f64>,
        best: &mut f64,
    ) {
        if w == per_worker.len() {
            let total: f64 = instance
                .tasks()
                .iter()
                .map(|t| {
                    let i = t.id.index();
                    if t.required.is_subset(&covered[i]) && fits_budget(cost[i], t.budget) {
                        t.budget - cost[i]
                    } else {
                        0.0
                    }
                })
                .sum();
            *best = best.max(total);
            return;
        }
        recurse(instance, per_worker, w + 1, covered, cost, best);
        for o in &per_worker[w] {
            let (saved_cov, saved_cost) = (covered[o.task].clone(), cost[o.task]);
            covered[o.task].union_with(&o.skills);
            cost[o.task] += o.reward;
            recurse(instance, per_worker, w + 1, covered, cost, best);
            cost[o.task] = saved_cost;
            covered[o.task] = saved_cov;
        }
    }

    let n = instance.tasks().len();
    let mut best = 0.0;
    recurse(
        instance,
        &per_worker,
        0,
        &mut vec![SkillSet::new(); n],
        &mut vec![0.0; n],
        &mut best,
    );
    best
}
