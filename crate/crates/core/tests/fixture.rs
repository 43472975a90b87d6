//! Running example: five workers, three tasks, five skills, gamma = 0.5.
//!
//! Ids are 0-based: w1..w5 are workers 0..4, t1..t3 tasks 0..2, s1..s5
//! skills 0..4. Expected values are hand evaluations of the reward and
//! utility formulas on the fixture's coordinates.

use sata_core::*;

const EPS: f64 = 1e-9;

fn fixture() -> Instance {
    io::load_instance(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/example1.json")).unwrap()
}

fn skills(ids: &[u32]) -> SkillSet {
    ids.iter().map(|&i| SkillId(i)).collect()
}

fn trace(a: &Assignment) -> Vec<(u32, u32, Vec<u32>)> {
    a.contracts
        .iter()
        .map(|c| (c.worker.0, c.task.0, c.used_skills.iter().map(|s| s.0).collect()))
        .collect()
}

#[test]
fn loads_running_example() {
    let inst = fixture();
    assert_eq!(inst.workers().len(), 5);
    assert_eq!(inst.tasks().len(), 3);
    assert_eq!(inst.gamma(), 0.5);
    assert_eq!(inst.workers()[1].fee(SkillId(2)), Some(5.0));
}

#[test]
fn quoted_distances() {
    let inst = fixture();
    let d = |w, t| inst.distance(WorkerId(w), TaskId(t)).unwrap();
    assert!((d(0, 0) - 5f64.sqrt()).abs() < EPS);
    assert!((d(4, 0) - 13f64.sqrt()).abs() < EPS);
    assert!((d(2, 2) - 2f64.sqrt()).abs() < EPS);
    assert!((d(3, 2) - 4.0).abs() < EPS);
    assert!((d(4, 2) - 10f64.sqrt()).abs() < EPS);
}

#[test]
fn reward_examples() {
    let inst = fixture();
    let r = inst
        .worker_reward(WorkerId(0), TaskId(0), &skills(&[0, 1]))
        .unwrap();
    assert!((r - (7.0 + 0.5 * 5f64.sqrt())).abs() < EPS);
    assert!((r - 8.1180).abs() < 1e-4);
    let r = inst.worker_reward(WorkerId(3), TaskId(2), &skills(&[4])).unwrap();
    assert!((r - 3.0).abs() < EPS);
}

#[test]
fn utility_of_hand_built_assignments() {
    let inst = fixture();

    let mut aba_t1 = Assignment::new();
    aba_t1.push_completed(
        TaskId(0),
        vec![inst.contract(WorkerId(4), TaskId(0), skills(&[0, 1])).unwrap()],
    );
    let u = inst.task_utility(&aba_t1, TaskId(0)).unwrap();
    assert!((u - (16.0 - 0.5 * 13f64.sqrt())).abs() < EPS);
    assert!((u - 14.197).abs() < 1e-3);

    // The t3 cover shown in the worked TBA example.
    let mut t3 = Assignment::new();
    t3.push_completed(
        TaskId(2),
        vec![
            inst.contract(WorkerId(2), TaskId(2), skills(&[3])).unwrap(),
            inst.contract(WorkerId(4), TaskId(2), skills(&[0, 1, 2])).unwrap(),
            inst.contract(WorkerId(3), TaskId(2), skills(&[4])).unwrap(),
        ],
    );
    let u = inst.task_utility(&t3, TaskId(2)).unwrap();
    let expected = 30.0 - 10.0 - 0.5 * (2f64.sqrt() + 4.0 + 10f64.sqrt());
    assert!((u - expected).abs() < EPS);
    assert!((u - 15.71).abs() < 1e-2);
    assert!(validate(&inst, &t3).is_valid());
    assert_eq!(inst.task_utility(&t3, TaskId(0)).unwrap(), 0.0);
}

#[test]
fn best_subset_examples() {
    let inst = fixture();
    // w1 on t1: {s1} scores 3 + 1.118, {s1,s2} scores (7 + 1.118) / 2.
    let c = best_subset_for_worker(&inst, WorkerId(0), TaskId(0), &skills(&[0, 1])).unwrap();
    assert_eq!(c.subset, skills(&[0, 1]));
    assert!((c.ratio - (7.0 + 0.5 * 5f64.sqrt()) / 2.0).abs() < EPS);
    // w3 owns nothing t1 needs.
    assert_eq!(
        best_subset_for_worker(&inst, WorkerId(2), TaskId(0), &skills(&[0, 1])),
        None
    );
}

#[test]
fn tba_trace() {
    let inst = fixture();
    let report = GreedySolver::TBA.solve(&inst);
    let order: Vec<u32> = report.attempts.iter().map(|a| a.task.0).collect();
    assert_eq!(order, vec![2, 1, 0]);
    assert_eq!(
        trace(&report.assignment),
        vec![
            (2, 2, vec![3]),
            (4, 2, vec![0, 1]),
            (3, 2, vec![4]),
            (1, 2, vec![2]),
            (0, 0, vec![0, 1]),
        ]
    );
    let t1 = 13.0 - 0.5 * 5f64.sqrt();
    let t3 = 18.0 - 0.5 * (2f64.sqrt() + 10f64.sqrt() + 4.0 + 18f64.sqrt());
    assert!((inst.total_utility(&report.assignment) - (t1 + t3)).abs() < EPS);
    assert!(validate(&inst, &report.assignment).is_valid());
}

#[test]
fn aba_trace() {
    let inst = fixture();
    let report = GreedySolver::ABA.solve(&inst);
    let order: Vec<u32> = report.attempts.iter().map(|a| a.task.0).collect();
    assert_eq!(order, vec![0, 1, 2]);
    assert_eq!(
        trace(&report.assignment),
        vec![
            (4, 0, vec![0, 1]),
            (2, 1, vec![3]),
            (1, 1, vec![2]),
            (3, 1, vec![0])
        ]
    );
    let t1 = 16.0 - 0.5 * 13f64.sqrt();
    let t2 = 12.0 - 0.5 * (45f64.sqrt() + 5f64.sqrt() + 17f64.sqrt());
    assert!((inst.total_utility(&report.assignment) - (t1 + t2)).abs() < EPS);
    assert!(!report.attempts[2].completed);
}

#[test]
fn all_relevant_rule_reproduces_worked_t3_cover() {
    let inst = fixture();
    let solver = GreedySolver {
        order: TaskOrder::TotalBudget,
        rule: SubsetRule::AllRelevant,
    };
    let a = solver.solve(&inst).assignment;
    assert_eq!(
        trace(&a)[..3],
        [(2, 2, vec![3]), (4, 2, vec![0, 1, 2]), (3, 2, vec![4])]
    );
    assert!(validate(&inst, &a).is_valid());
}

#[test]
fn exact_optimum_of_fixture() {
    let inst = fixture();
    let a = exact_optimal(&inst, MappingBound::default()).unwrap();
    // t1 by w1 alone plus the worked-example cover of t3.
    let t1 = 13.0 - 0.5 * 5f64.sqrt();
    let t3 = 20.0 - 0.5 * (2f64.sqrt() + 4.0 + 10f64.sqrt());
    assert!((inst.total_utility(&a) - (t1 + t3)).abs() < EPS);
    assert!(validate(&inst, &a).is_valid());
    for h in [solve_tba(&inst), solve_aba(&inst), solve_random(&inst, 3)] {
        assert!(inst.total_utility(&h) <= inst.total_utility(&a) + EPS);
    }
}

#[test]
fn no_assignment_completes_all_three_tasks() {
    // s2 is offered only by w1 and w5, s3 only by w2 and w5, and s5 only by
    // w2 and w4; with one task per worker the three tasks cannot all be
    // covered, whatever the budgets.
    let inst = fixture();
    let (nw, nt) = (inst.workers().len() as u32, inst.tasks().len() as u32);
    for code in 0..(nt + 1).pow(nw) {
        let mut digits = code;
        let mut covered = vec![SkillSet::new(); nt as usize];
        for w in inst.workers() {
            let d = digits % (nt + 1);
            digits /= nt + 1;
            if d > 0 {
                for sf in &w.skills {
                    covered[d as usize - 1].insert(sf.skill);
                }
            }
        }
        let all = inst
            .tasks()
            .iter()
            .all(|t| t.required.is_subset(&covered[t.id.index()]));
        assert!(!all, "mapping {code} covers every task");
    }
}
