//! Mechanical check of an assignment against the problem constraints.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::model::{fits_budget, Assignment, Instance, TaskId, WorkerId};
use crate::skills::{SkillId, SkillSet};

/// Tolerance when recomputing a contract's stored fees.
const FEE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnknownWorker {
        contract: usize,
        worker: WorkerId,
    },
    UnknownTask {
        contract: usize,
        task: TaskId,
    },
    DuplicateWorker {
        worker: WorkerId,
    },
    EmptyContract {
        contract: usize,
    },
    SkillNotOwned {
        contract: usize,
        worker: WorkerId,
        skill: SkillId,
    },
    SkillNotRequired {
        contract: usize,
        task: TaskId,
        skill: SkillId,
    },
    FeeMismatch {
        contract: usize,
        stored: f64,
        recomputed: f64,
    },
    UncoveredSkill {
        task: TaskId,
        skill: SkillId,
    },
    BudgetOverrun {
        task: TaskId,
        cost: f64,
        budget: f64,
    },
    ContractOnIncompleteTask {
        contract: usize,
        task: TaskId,
    },
    UnknownCompletedTask {
        task: TaskId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownWorker { contract, worker } => {
                write!(f, "contract #{contract}: unknown worker {worker}")
            }
            Violation::UnknownTask { contract, task } => {
                write!(f, "contract #{contract}: unknown task {task}")
            }
            Violation::DuplicateWorker { worker } => {
                write!(f, "worker {worker} appears in more than one contract")
            }
            Violation::EmptyContract { contract } => {
                write!(f, "contract #{contract}: no skills used")
            }
            Violation::SkillNotOwned {
                contract,
                worker,
                skill,
            } => write!(f, "contract #{contract}: worker {worker} does not own {skill}"),
            Violation::SkillNotRequired {
                contract,
                task,
                skill,
            } => write!(f, "contract #{contract}: task {task} does not require {skill}"),
            Violation::FeeMismatch {
                contract,
                stored,
                recomputed,
            } => write!(
                f,
                "contract #{contract}: stored fee {stored} differs from recomputed {recomputed}"
            ),
            Violation::UncoveredSkill { task, skill } => {
                write!(f, "completed task {task} has uncovered skill {skill}")
            }
            Violation::BudgetOverrun { task, cost, budget } => {
                write!(f, "task {task} pays {cost} over budget {budget}")
            }
            Violation::ContractOnIncompleteTask { contract, task } => {
                write!(
                    f,
                    "contract #{contract} targets task {task}, which is not completed"
                )
            }
            Violation::UnknownCompletedTask { task } => {
                write!(f, "completed set names unknown task {task}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every constraint the assignment breaks. An empty report means each
/// worker holds at most one contract, every contract is well formed and
/// consistent with the instance, and every completed task is fully covered
/// within budget while no other task holds contracts.
pub fn validate(instance: &Instance, assignment: &Assignment) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen = BTreeSet::new();
    let mut reported_dup = BTreeSet::new();
    let mut covered: BTreeMap<TaskId, SkillSet> = BTreeMap::new();
    let mut cost: BTreeMap<TaskId, f64> = BTreeMap::new();

    for task in &assignment.completed {
        if instance.task(*task).is_err() {
            violations.push(Violation::UnknownCompletedTask { task: *task });
        }
    }

    for (i, c) in assignment.contracts.iter().enumerate() {
        if !seen.insert(c.worker) && reported_dup.insert(c.worker) {
            violations.push(Violation::DuplicateWorker { worker: c.worker });
        }
        let worker = match instance.worker(c.worker) {
            Ok(w) => Some(w),
            Err(_) => {
                violations.push(Violation::UnknownWorker {
                    contract: i,
                    worker: c.worker,
                });
                None
            }
        };
        let task = match instance.task(c.task) {
            Ok(t) => Some(t),
            Err(_) => {
                violations.push(Violation::UnknownTask {
                    contract: i,
                    task: c.task,
                });
                None
            }
        };
        if c.used_skills.is_empty() {
            violations.push(Violation::EmptyContract { contract: i });
        }
        if task.is_some() && !assignment.completed.contains(&c.task) {
            violations.push(Violation::ContractOnIncompleteTask {
                contract: i,
                task: c.task,
            });
        }
        let (Some(worker), Some(task)) = (worker, task) else {
            continue;
        };

        let mut labor = 0.0;
        let mut owned = true;
        let cov = covered.entry(c.task).or_default();
        for &s in &c.used_skills {
            match worker.fee(s) {
                Some(fee) => {
                    labor += fee;
                    cov.insert(s);
                }
                None => {
                    owned = false;
                    violations.push(Violation::SkillNotOwned {
                        contract: i,
                        worker: c.worker,
                        skill: s,
                    });
                }
            }
            if !task.required.contains(s) {
                violations.push(Violation::SkillNotRequired {
                    contract: i,
                    task: c.task,
                    skill: s,
                });
            }
        }
        let transport = instance.transport_fee(worker.id.index(), task.id.index());
        if (transport - c.transport_fee).abs() > FEE_TOL {
            violations.push(Violation::FeeMismatch {
                contract: i,
                stored: c.transport_fee,
                recomputed: transport,
            });
        }
        if owned && (labor - c.labor_fee).abs() > FEE_TOL {
            violations.push(Violation::FeeMismatch {
                contract: i,
                stored: c.labor_fee,
                recomputed: labor,
            });
        }

        *cost.entry(c.task).or_default() += c.reward();
    }

    for &tid in &assignment.completed {
        let Ok(task) = instance.task(tid) else {
            continue;
        };
        let cov = covered.get(&tid);
        for &s in &task.required {
            if !cov.is_some_and(|c| c.contains(s)) {
                violations.push(Violation::UncoveredSkill { task: tid, skill: s });
            }
        }
        let paid = cost.get(&tid).copied().unwrap_or(0.0);
        if !fits_budget(paid, task.budget) {
            violations.push(Violation::BudgetOverrun {
                task: tid,
                cost: paid,
                budget: task.budget,
            });
        }
    }

    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Contract, Point, Task, Worker};

    fn instance() -> Instance {
        Instance::new(
            3,
            0.0,
            vec![
                Worker::new(0, Point::default(), [(0, 2.0), (1, 3.0)]),
                Worker::new(1, Point::default(), [(2, 4.0)]),
            ],
            vec![
                Task::new(0, Point::default(), [0, 1, 2], 9.0),
                Task::new(1, Point::default(), [2], 10.0),
            ],
            None,
        )
        .unwrap()
    }

    fn skills(ids: &[u32]) -> SkillSet {
        ids.iter().map(|&i| SkillId(i)).collect()
    }

    fn valid_assignment(inst: &Instance) -> Assignment {
        let mut a = Assignment::new();
        a.push_completed(
            TaskId(0),
            vec![
                inst.contract(WorkerId(0), TaskId(0), skills(&[0, 1])).unwrap(),
                inst.contract(WorkerId(1), TaskId(0), skills(&[2])).unwrap(),
            ],
        );
        a
    }

    #[test]
    fn valid_assignment_has_empty_report() {
        let inst = instance();
        let report = validate(&inst, &valid_assignment(&inst));
        assert!(report.is_valid(), "{report}");
        assert!(validate(&inst, &Assignment::new()).is_valid());
    }

    #[test]
    fn missing_skill_is_one_uncovered_violation() {
        let inst = instance();
        let mut a = valid_assignment(&inst);
        a.contracts.pop();
        let report = validate(&inst, &a);
        assert_eq!(
            report.violations,
            vec![Violation::UncoveredSkill {
                task: TaskId(0),
                skill: SkillId(2)
            }]
        );
    }

    #[test]
    fn overrun_by_a_cent_is_one_budget_violation() {
        let inst = Instance::new(
            3,
            0.0,
            instance().workers().to_vec(),
            vec![
                Task::new(0, Point::default(), [0, 1, 2], 9.0 - 0.01),
                Task::new(1, Point::default(), [2], 10.0),
            ],
            None,
        )
        .unwrap();
        let report = validate(&inst, &valid_assignment(&inst));
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(
            report.violations[0],
            Violation::BudgetOverrun { task: TaskId(0), .. }
        ));
    }

    #[test]
    fn flags_duplicate_worker_and_incomplete_task() {
        let inst = instance();
        let mut a = valid_assignment(&inst);
        a.contracts
            .push(inst.contract(WorkerId(1), TaskId(1), skills(&[2])).unwrap());
        let report = validate(&inst, &a);
        assert!(report
            .violations
            .contains(&Violation::DuplicateWorker { worker: WorkerId(1) }));
        assert!(report.violations.contains(&Violation::ContractOnIncompleteTask {
            contract: 2,
            task: TaskId(1)
        }));
    }

    #[test]
    fn flags_unowned_and_unrequired_skills() {
        let inst = instance();
        let mut a = Assignment::new();
        a.completed.insert(TaskId(1));
        a.contracts.push(Contract {
            worker: WorkerId(0),
            task: TaskId(1),
            used_skills: skills(&[0, 2]),
            transport_fee: 0.0,
            labor_fee: 2.0,
        });
        let v = validate(&inst, &a).violations;
        assert!(v.contains(&Violation::SkillNotOwned {
            contract: 0,
            worker: WorkerId(0),
            skill: SkillId(2)
        }));
        assert!(v.contains(&Violation::SkillNotRequired {
            contract: 0,
            task: TaskId(1),
            skill: SkillId(0)
        }));
        assert!(v.contains(&Violation::UncoveredSkill {
            task: TaskId(1),
            skill: SkillId(2)
        }));
    }

    #[test]
    fn flags_tampered_fees() {
        let inst = instance();
        let mut a = valid_assignment(&inst);
        a.contracts[0].labor_fee = 1.0;
        let v = validate(&inst, &a).violations;
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::FeeMismatch { contract: 0, .. }));
    }
}
