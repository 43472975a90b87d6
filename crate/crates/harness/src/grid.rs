//! Experiment grids: one generator parameter swept over a list of values.

use std::fmt;
use std::path::Path;

use sata_core::GenParams;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Tba,
    Aba,
    Random,
    Exact,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Tba => "tba",
            Algorithm::Aba => "aba",
            Algorithm::Random => "random",
            Algorithm::Exact => "exact",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Algorithm::Tba,
            Algorithm::Aba,
            Algorithm::Random,
            Algorithm::Exact,
        ]
        .into_iter()
        .find(|a| a.name() == name)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFactor {
    NTasks,
    NWorkers,
    Gamma,
    MeanBudget,
    MeanPrice,
    NSkills,
}

impl SweepFactor {
    pub const ALL: [SweepFactor; 6] = [
        SweepFactor::NTasks,
        SweepFactor::NWorkers,
        SweepFactor::Gamma,
        SweepFactor::MeanBudget,
        SweepFactor::MeanPrice,
        SweepFactor::NSkills,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepFactor::NTasks => "n_tasks",
            SweepFactor::NWorkers => "n_workers",
            SweepFactor::Gamma => "gamma",
            SweepFactor::MeanBudget => "mean_budget",
            SweepFactor::MeanPrice => "mean_price",
            SweepFactor::NSkills => "n_skills",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    /// The standard five-point sweep for this factor; the middle value is
    /// the generator default.
    pub fn standard_values(self) -> Vec<f64> {
        match self {
            SweepFactor::NTasks => vec![100.0, 300.0, 500.0, 700.0, 900.0],
            SweepFactor::NWorkers => vec![1000.0, 3000.0, 5000.0, 7000.0, 9000.0],
            SweepFactor::Gamma => vec![0.1, 0.3, 0.5, 0.7, 0.9],
            SweepFactor::MeanBudget => vec![60.0, 80.0, 100.0, 120.0, 140.0],
            SweepFactor::MeanPrice => vec![10.0, 15.0, 20.0, 25.0, 30.0],
            SweepFactor::NSkills => vec![10.0, 20.0, 30.0, 40.0, 50.0],
        }
    }

    fn is_count(self) -> bool {
        matches!(
            self,
            SweepFactor::NTasks | SweepFactor::NWorkers | SweepFactor::NSkills
        )
    }
}

impl fmt::Display for SweepFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum GridError {
    #[error("invalid grid: {0}")]
    Invalid(String),
    #[error("cannot read grid {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse grid {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
}

fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Tba, Algorithm::Aba, Algorithm::Random]
}

fn default_repetitions() -> u32 {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentGrid {
    #[serde(default)]
    pub base: GenParams,
    pub sweep_factor: SweepFactor,
    pub sweep_values: Vec<f64>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    #[serde(default)]
    pub seed: u64,
}

impl Default for ExperimentGrid {
    /// Task-count sweep around the default generator settings.
    fn default() -> Self {
        Self::standard(SweepFactor::NTasks)
    }
}

impl ExperimentGrid {
    /// Standard sweep of `factor`, defaults elsewhere, all three algorithms,
    /// 20 repetitions.
    pub fn standard(factor: SweepFactor) -> Self {
        Self {
            base: GenParams::default(),
            sweep_factor: factor,
            sweep_values: factor.standard_values(),
            algorithms: default_algorithms(),
            repetitions: default_repetitions(),
            seed: 0,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, GridError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| GridError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| GridError::Parse {
            path: path.display().to_string(),
            source,
        })
    }

    /// Generator parameters for one sweep value; the seed is left to the
    /// caller.
    pub fn params_for(&self, value: f64) -> GenParams {
        let mut p = self.base.clone();
        match self.sweep_factor {
            SweepFactor::NTasks => p.n_tasks = value as u32,
            SweepFactor::NWorkers => p.n_workers = value as u32,
            SweepFactor::Gamma => p.gamma = value,
            SweepFactor::MeanBudget => p.mean_budget = value,
            SweepFactor::MeanPrice => p.mean_price = value,
            SweepFactor::NSkills => p.n_skills = value as u32,
        }
        p
    }

    pub fn validate(&self) -> Result<(), GridError> {
        let fail = |m: String| Err(GridError::Invalid(m));
        if self.sweep_values.is_empty() {
            return fail("sweep_values must not be empty".into());
        }
        if self.repetitions == 0 {
            return fail("repetitions must be at least 1".into());
        }
        if self.algorithms.is_empty() {
            return fail("algorithms must not be empty".into());
        }
        if let Some(a) = self.algorithms.iter().find(|a| **a == Algorithm::Exact) {
            return fail(format!("algorithm {a} cannot be used in a grid"));
        }
        for &v in &self.sweep_values {
            if self.sweep_factor.is_count() && (v.fract() != 0.0 || !(0.0..=u32::MAX as f64).contains(&v)) {
                return fail(format!("{} value {v} is not a count", self.sweep_factor));
            }
            self.params_for(v)
                .validate()
                .or_else(|e| fail(format!("{} = {v}: {e}", self.sweep_factor)))?;
        }
        Ok(())
    }
}
