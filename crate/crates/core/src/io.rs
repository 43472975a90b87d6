//! JSON files for instances and assignments.
//!
//! Instance schema:
//!
//! ```json
//! {
//!   "gamma": 0.5,
//!   "skills": 5,
//!   "workers": [{"id": 0, "x": 0.0, "y": 0.0, "skills": [{"skill": 0, "fee": 3.0}]}],
//!   "tasks": [{"id": 0, "x": 1.0, "y": 2.0, "required": [0, 1], "budget": 20.0}],
//!   "distances": [[2.5]]
//! }
//! ```
//!
//! `distances` is optional; it is either one row per worker or a flat
//! row-major array of `|W| * |T|` numbers. Entries may appear in any id
//! order, but ids must form `0..n` without duplicates.
//!
//! An assignment file is the JSON form of [`Assignment`]:
//! `{"contracts": [{"worker", "task", "used_skills", "transport_fee", "labor_fee"}], "completed": [..]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{IoError, ModelError};
use crate::model::{Assignment, DistanceMatrix, Instance, Point, SkillFee, Task, TaskId, Worker, WorkerId};
use crate::skills::SkillId;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    gamma: f64,
    skills: u32,
    workers: Vec<WorkerRecord>,
    tasks: Vec<TaskRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    distances: Option<Distances>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkerRecord {
    id: u32,
    x: f64,
    y: f64,
    skills: Vec<SkillFee>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskRecord {
    id: u32,
    x: f64,
    y: f64,
    required: Vec<SkillId>,
    budget: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Distances {
    Rows(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

fn schema(origin: &str, location: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema {
        path: origin.to_string(),
        location: location.into(),
        message: message.into(),
    }
}

/// Sorts records by id and checks the ids are exactly `0..n`.
fn order_by_id<T>(
    origin: &str,
    what: &str,
    mut records: Vec<T>,
    id: impl Fn(&T) -> u32,
) -> Result<Vec<T>, IoError> {
    let mut ids: Vec<(u32, usize)> = records.iter().enumerate().map(|(i, r)| (id(r), i)).collect();
    ids.sort_unstable();
    for w in ids.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(schema(
                origin,
                format!("{what}[{}].id", w[1].1),
                format!("duplicate {} id {}", &what[..what.len() - 1], w[1].0),
            ));
        }
    }
    if let Some((pos, (found, at))) = ids.iter().enumerate().find(|(pos, (i, _))| *i as usize != *pos) {
        return Err(schema(
            origin,
            format!("{what}[{at}].id"),
            format!("ids must be contiguous from 0; expected {pos}, found {found}"),
        ));
    }
    records.sort_by_key(|r| id(r));
    Ok(records)
}

fn from_file(origin: &str, file: InstanceFile) -> Result<Instance, IoError> {
    let workers = order_by_id(origin, "workers", file.workers, |w| w.id)?;
    let tasks = order_by_id(origin, "tasks", file.tasks, |t| t.id)?;

    for t in &tasks {
        let mut req = t.required.clone();
        req.sort_unstable();
        if let Some(w) = req.windows(2).find(|w| w[0] == w[1]) {
            return Err(schema(
                origin,
                format!("tasks[id={}].required", t.id),
                format!("duplicate skill {}", w[0].0),
            ));
        }
    }

    let distances = match file.distances {
        None => None,
        Some(Distances::Rows(rows)) => Some(DistanceMatrix::from_rows(rows)),
        Some(Distances::Flat(data)) => {
            let cols = tasks.len();
            let rows = data.len().checked_div(cols).unwrap_or(0);
            Some(DistanceMatrix::new(rows, cols, data))
        }
    }
    .transpose()
    .map_err(|e| model_error(origin, e))?;

    let workers = workers
        .into_iter()
        .map(|w| Worker {
            id: WorkerId(w.id),
            location: Point::new(w.x, w.y),
            skills: w.skills,
        })
        .collect();
    let tasks = tasks
        .into_iter()
        .map(|t| Task {
            id: TaskId(t.id),
            location: Point::new(t.x, t.y),
            required: t.required.into(),
            budget: t.budget,
        })
        .collect();
    Instance::new(file.skills, file.gamma, workers, tasks, distances).map_err(|e| model_error(origin, e))
}

fn model_error(origin: &str, e: ModelError) -> IoError {
    match e {
        ModelError::InvalidInstance { location, message } => schema(origin, location, message),
        other => schema(origin, "instance", other.to_string()),
    }
}

fn to_file(instance: &Instance) -> InstanceFile {
    InstanceFile {
        gamma: instance.gamma(),
        skills: instance.skill_count(),
        workers: instance
            .workers()
            .iter()
            .map(|w| WorkerRecord {
                id: w.id.0,
                x: w.location.x,
                y: w.location.y,
                skills: w.skills.clone(),
            })
            .collect(),
        tasks: instance
            .tasks()
            .iter()
            .map(|t| TaskRecord {
                id: t.id.0,
                x: t.location.x,
                y: t.location.y,
                required: t.required.as_slice().to_vec(),
                budget: t.budget,
            })
            .collect(),
        distances: instance
            .distance_override()
            .map(|m| Distances::Rows((0..m.rows()).map(|r| m.row(r).to_vec()).collect())),
    }
}

fn json_error(origin: &str, e: serde_json::Error) -> IoError {
    IoError::Json {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses an instance; `origin` names the source in error messages.
pub fn instance_from_json(text: &str, origin: &str) -> Result<Instance, IoError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| json_error(origin, e))?;
    from_file(origin, file)
}

pub fn instance_to_json(instance: &Instance) -> String {
    serde_json::to_string_pretty(&to_file(instance)).expect("instance serializes")
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, mut text: String) -> Result<(), IoError> {
    text.push('\n');
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance, IoError> {
    let path = path.as_ref();
    instance_from_json(&read(path)?, &path.display().to_string())
}

pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<(), IoError> {
    write(path.as_ref(), instance_to_json(instance))
}

pub fn load_assignment(path: impl AsRef<Path>) -> Result<Assignment, IoError> {
    let path = path.as_ref();
    let origin = path.display().to_string();
    serde_json::from_str(&read(path)?).map_err(|e| json_error(&origin, e))
}

pub fn save_assignment(assignment: &Assignment, path: impl AsRef<Path>) -> Result<(), IoError> {
    write(
        path.as_ref(),
        serde_json::to_string_pretty(assignment).expect("assignment serializes"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "gamma": 0.5, "skills": 3,
        "workers": [
            {"id": 1, "x": 1, "y": 1, "skills": [{"skill": 2, "fee": 1.5}]},
            {"id": 0, "x": 0, "y": 0, "skills": [{"skill": 0, "fee": 3}, {"skill": 1, "fee": 4}]}
        ],
        "tasks": [{"id": 0, "x": 1, "y": 2, "required": [1, 0], "budget": 20}]
    }"#;

    #[test]
    fn parses_out_of_order_ids() {
        let inst = instance_from_json(SMALL, "small").unwrap();
        assert_eq!(inst.workers()[0].skills.len(), 2);
        assert_eq!(inst.workers()[1].id, WorkerId(1));
        assert_eq!(inst.tasks()[0].required.len(), 2);
    }

    #[test]
    fn duplicate_worker_id_is_schema_error() {
        let text = SMALL.replace(r#""id": 1, "x""#, r#""id": 0, "x""#);
        let err = instance_from_json(&text, "dup.json").unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, IoError::Schema { .. }), "{msg}");
        assert!(msg.contains("duplicate worker id 0"), "{msg}");
    }

    #[test]
    fn gap_in_ids_is_schema_error() {
        let text = SMALL.replace(r#""id": 1, "x""#, r#""id": 2, "x""#);
        assert!(matches!(
            instance_from_json(&text, "gap").unwrap_err(),
            IoError::Schema { .. }
        ));
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = instance_from_json("{\n  \"gamma\": ,", "bad").unwrap_err();
        match err {
            IoError::Json { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn invariant_breach_names_location() {
        let text = SMALL.replace(r#""fee": 1.5"#, r#""fee": -1.5"#);
        let msg = instance_from_json(&text, "neg").unwrap_err().to_string();
        assert!(msg.contains("workers[1].skills[0]"), "{msg}");
        let text = SMALL.replace(r#"[1, 0]"#, r#"[1, 1]"#);
        assert!(instance_from_json(&text, "dup skill").is_err());
    }

    #[test]
    fn flat_and_nested_distances_agree() {
        let nested = SMALL.replace(
            r#""budget": 20}]"#,
            r#""budget": 20}], "distances": [[4.0], [7.25]]"#,
        );
        let flat = SMALL.replace(r#""budget": 20}]"#, r#""budget": 20}], "distances": [4.0, 7.25]"#);
        let a = instance_from_json(&nested, "nested").unwrap();
        let b = instance_from_json(&flat, "flat").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.distance(WorkerId(1), TaskId(0)).unwrap(), 7.25);
        let wrong = SMALL.replace(r#""budget": 20}]"#, r#""budget": 20}], "distances": [4.0]"#);
        assert!(instance_from_json(&wrong, "short").is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_instance("/nonexistent/instance.json").unwrap_err(),
            IoError::Io { .. }
        ));
    }
}
