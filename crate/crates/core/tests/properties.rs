use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sata_core::oracle::solve_random_report;
use sata_core::testkit::{
    brute_force_optimum, exhaustive_allocation_cost, exhaustive_best_subset, random_small_instance,
    SmallLimits,
};
use sata_core::{
    best_subset_for_worker, exact_optimal, generate_instance, greedy_cover_task, io, mapped_task_cost,
    solve_aba, solve_random, solve_tba, validate, Assignment, GenParams, Instance, MappingBound, SkillSet,
    TaskId, WorkerId, WorkerPool,
};

const TOL: f64 = 1e-9;

fn random_remaining(rng: &mut ChaCha8Rng, inst: &Instance, task: TaskId) -> SkillSet {
    let req = &inst.tasks()[task.index()].required;
    let mut out: SkillSet = req.iter().copied().filter(|_| rng.random_bool(0.7)).collect();
    if out.is_empty() {
        out = req.clone();
    }
    out
}

fn check_prefix_rule(limits: SmallLimits, seed: u64, rounds: usize, exact_sets: bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    while checked < rounds {
        let inst = random_small_instance(&mut rng, limits);
        for w in inst.workers() {
            for t in inst.tasks() {
                let remaining = random_remaining(&mut rng, &inst, t.id);
                let fast = best_subset_for_worker(&inst, w.id, t.id, &remaining);
                let slow = exhaustive_best_subset(&inst, w.id, t.id, &remaining);
                match (fast, slow) {
                    (None, None) => {}
                    (Some(c), Some((set, ratio))) => {
                        assert!(
                            (c.ratio - ratio).abs() <= TOL,
                            "{w:?} {t:?}: {} vs {ratio}",
                            c.ratio
                        );
                        if exact_sets {
                            assert_eq!(c.subset, set, "{w:?} {t:?} remaining {remaining}");
                        }
                        assert!(c.subset.is_subset(&remaining));
                    }
                    (f, s) => panic!("presence differs: {f:?} vs {s:?}"),
                }
                checked += 1;
            }
        }
    }
}

#[test]
fn prefix_rule_matches_subset_enumeration() {
    let limits = SmallLimits {
        max_skills: 10,
        max_skills_per_worker: 8,
        ..SmallLimits::default()
    };
    check_prefix_rule(limits, 1, 3000, false);
}

#[test]
fn prefix_rule_breaks_exact_ties_like_enumeration() {
    let limits = SmallLimits {
        max_skills: 6,
        max_skills_per_worker: 5,
        integer_money: true,
        ..SmallLimits::default()
    };
    check_prefix_rule(limits, 2, 3000, true);
}

#[test]
fn exact_dominates_heuristics_and_all_outputs_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..400 {
        let inst = random_small_instance(&mut rng, SmallLimits::default());
        let exact = exact_optimal(&inst, MappingBound::default()).unwrap();
        let best = inst.total_utility(&exact);
        let outputs = [
            ("tba", solve_tba(&inst)),
            ("aba", solve_aba(&inst)),
            ("random", solve_random(&inst, i)),
            ("exact", exact),
        ];
        for (name, a) in &outputs {
            let report = validate(&inst, a);
            assert!(report.is_valid(), "{name} on instance {i}: {report}");
            assert!(
                inst.total_utility(a) <= best + TOL,
                "{name} beats exact on instance {i}"
            );
        }
    }
}

#[test]
fn exact_matches_unrestricted_brute_force() {
    let limits = SmallLimits {
        max_workers: 5,
        max_tasks: 2,
        max_skills: 4,
        max_skills_per_worker: 3,
        integer_money: false,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..300 {
        let inst = random_small_instance(&mut rng, limits);
        let exact = inst.total_utility(&exact_optimal(&inst, MappingBound::default()).unwrap());
        let brute = brute_force_optimum(&inst);
        assert!((exact - brute).abs() <= 1e-7, "instance {i}: {exact} vs {brute}");
    }
}

#[test]
fn cheapest_provider_labor_is_optimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let inst = random_small_instance(&mut rng, SmallLimits::default());
        for t in inst.tasks() {
            let mapped: Vec<WorkerId> = inst
                .workers()
                .iter()
                .map(|w| w.id)
                .filter(|_| rng.random_bool(0.5))
                .collect();
            let fast = mapped_task_cost(&inst, t.id, &mapped);
            let slow = exhaustive_allocation_cost(&inst, t.id, &mapped);
            match (fast, slow) {
                (None, None) => {}
                (Some(a), Some(b)) => assert!((a - b).abs() <= TOL, "{a} vs {b}"),
                other => panic!("feasibility differs: {other:?}"),
            }
        }
    }
}

#[test]
fn failed_cover_leaves_pool_untouched() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..500 {
        let inst = random_small_instance(&mut rng, SmallLimits::default());
        let mut pool = WorkerPool::full(&inst);
        for t in inst.tasks() {
            let before: Vec<WorkerId> = pool.iter().collect();
            match greedy_cover_task(&inst, t.id, &mut pool) {
                None => assert_eq!(pool.iter().collect::<Vec<_>>(), before),
                Some(contracts) => {
                    let mut hired: Vec<WorkerId> = contracts.iter().map(|c| c.worker).collect();
                    hired.sort();
                    let mut after: Vec<WorkerId> = pool.iter().chain(hired.iter().copied()).collect();
                    after.sort();
                    assert_eq!(after, before);
                    assert!(hired.iter().all(|w| !pool.contains(*w)));
                }
            }
        }
    }
}

/// Every mutation below breaks a constraint that a valid assignment meets.
fn mutations(inst: &Instance, a: &Assignment) -> Vec<(&'static str, Assignment)> {
    let mut out = Vec::new();
    let first = &a.contracts[0];

    let mut m = a.clone();
    m.contracts.remove(0);
    out.push(("drop contract", m));

    let mut m = a.clone();
    m.contracts[0].labor_fee += 1.0;
    out.push(("tamper fee", m));

    let mut m = a.clone();
    m.contracts.push(first.clone());
    out.push(("duplicate worker", m));

    let mut m = a.clone();
    m.completed.remove(&first.task);
    out.push(("uncomplete task", m));

    let mut m = a.clone();
    m.contracts[0].used_skills = SkillSet::new();
    out.push(("empty contract", m));

    if let Some(s) = (0..inst.skill_count())
        .map(sata_core::SkillId)
        .find(|s| !inst.workers()[first.worker.index()].has_skill(*s))
    {
        let mut m = a.clone();
        m.contracts[0].used_skills.insert(s);
        out.push(("unowned skill", m));
    }
    out
}

#[test]
fn validator_flags_mutated_assignments() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tried = 0;
    while tried < 300 {
        let inst = random_small_instance(&mut rng, SmallLimits::default());
        let a = solve_tba(&inst);
        if a.contracts.is_empty() {
            continue;
        }
        tried += 1;
        for (name, m) in mutations(&inst, &a) {
            assert!(!validate(&inst, &m).is_valid(), "{name} not flagged");
        }

        // Shrink the budget of a completed task just below what it pays.
        let t = a.contracts[0].task;
        let paid: f64 = a.contracts_for(t).map(|c| c.reward()).sum();
        let mut tasks = inst.tasks().to_vec();
        tasks[t.index()].budget = paid - 0.01;
        if tasks[t.index()].budget >= 0.0 {
            let tight = Instance::new(
                inst.skill_count(),
                inst.gamma(),
                inst.workers().to_vec(),
                tasks,
                None,
            )
            .unwrap();
            assert!(!validate(&tight, &a).is_valid(), "overrun not flagged");
        }
    }
}

#[test]
fn solvers_are_deterministic() {
    let inst = generate_instance(&GenParams {
        n_tasks: 40,
        n_workers: 300,
        seed: 8,
        ..GenParams::default()
    })
    .unwrap();
    assert_eq!(solve_tba(&inst), solve_tba(&inst));
    assert_eq!(solve_aba(&inst), solve_aba(&inst));
    assert_eq!(solve_random(&inst, 9), solve_random(&inst, 9));
    assert_eq!(solve_random_report(&inst, 9).assignment, solve_random(&inst, 9));
}

#[test]
fn generated_files_are_byte_identical_and_round_trip() {
    let params = GenParams {
        n_tasks: 30,
        n_workers: 200,
        seed: 10,
        ..GenParams::default()
    };
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    io::save_instance(&generate_instance(&params).unwrap(), &p1).unwrap();
    io::save_instance(&generate_instance(&params).unwrap(), &p2).unwrap();
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());

    let loaded = io::load_instance(&p1).unwrap();
    assert_eq!(loaded, generate_instance(&params).unwrap());

    let a = solve_tba(&loaded);
    let ap = dir.path().join("assignment.json");
    io::save_assignment(&a, &ap).unwrap();
    assert_eq!(io::load_assignment(&ap).unwrap(), a);
}

#[test]
fn generated_fee_moments_match_params() {
    let params = GenParams {
        n_tasks: 5000,
        n_workers: 5000,
        seed: 12,
        ..GenParams::default()
    };
    let inst = generate_instance(&params).unwrap();
    let fees: Vec<f64> = inst
        .workers()
        .iter()
        .flat_map(|w| w.skills.iter().map(|s| s.fee))
        .collect();
    let budgets: Vec<f64> = inst.tasks().iter().map(|t| t.budget).collect();
    for (xs, mean, sd) in [
        (&fees, params.mean_price, params.price_sd()),
        (&budgets, params.mean_budget, params.budget_sd()),
    ] {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let s = (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!((m - mean).abs() < 3.0 * sd / n.sqrt(), "mean {m} vs {mean}");
        assert!((s - sd).abs() < 0.05 * sd, "sd {s} vs {sd}");
    }
}

proptest! {
    #[test]
    fn reward_grows_with_skills_and_distance(
        fees in prop::collection::vec(0.0f64..50.0, 2..6),
        gamma in 0.0f64..2.0,
        x in 0.0f64..100.0,
    ) {
        let skills: Vec<(u32, f64)> = fees.iter().enumerate().map(|(i, &f)| (i as u32, f)).collect();
        let n = fees.len() as u32;
        let inst = Instance::new(
            n,
            gamma,
            vec![sata_core::Worker::new(0, sata_core::Point::new(x, 0.0), skills)],
            vec![
                sata_core::Task::new(0, sata_core::Point::new(0.0, 0.0), 0..n, 100.0),
                sata_core::Task::new(1, sata_core::Point::new(-10.0, 0.0), 0..n, 100.0),
            ],
            None,
        ).unwrap();
        let mut used = SkillSet::new();
        let mut last = 0.0;
        for s in 0..n {
            used.insert(sata_core::SkillId(s));
            let r = inst.worker_reward(WorkerId(0), TaskId(0), &used).unwrap();
            prop_assert!(r >= last);
            prop_assert!(inst.worker_reward(WorkerId(0), TaskId(1), &used).unwrap() >= r);
            last = r;
        }
    }
}
