//! Seeded synthetic instances.
//!
//! Locations are uniform over a square. Skill sets are drawn without
//! replacement. Fees and budgets are Gaussian, truncated by resampling
//! until the draw exceeds [`MIN_MONEY`].

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::ParamsError;
use crate::model::{Instance, Point, SkillFee, Task, TaskId, Worker, WorkerId};
use crate::skills::{SkillId, SkillSet};

/// Truncation floor for generated fees and budgets.
pub const MIN_MONEY: f64 = 0.01;

/// Inclusive range of skill counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRange {
    pub min: u32,
    pub max: u32,
}

impl CountRange {
    pub const fn new(min: u32, max: u32) -> Self {
        Self { min, max }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenParams {
    pub n_tasks: u32,
    pub n_workers: u32,
    pub gamma: f64,
    pub mean_budget: f64,
    pub mean_price: f64,
    pub n_skills: u32,
    pub skills_per_worker: CountRange,
    pub skills_per_task: CountRange,
    pub area_side: f64,
    /// Defaults to `mean_budget / 5` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_sd: Option<f64>,
    /// Defaults to `mean_price / 5` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub price_sd: Option<f64>,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            n_tasks: 500,
            n_workers: 5000,
            gamma: 0.5,
            mean_budget: 100.0,
            mean_price: 20.0,
            n_skills: 30,
            skills_per_worker: CountRange::new(1, 5),
            skills_per_task: CountRange::new(1, 5),
            area_side: 100.0,
            budget_sd: None,
            price_sd: None,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn budget_sd(&self) -> f64 {
        self.budget_sd.unwrap_or(self.mean_budget / 5.0)
    }

    pub fn price_sd(&self) -> f64 {
        self.price_sd.unwrap_or(self.mean_price / 5.0)
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let fail = |m: String| Err(ParamsError(m));
        if self.n_tasks == 0 || self.n_workers == 0 || self.n_skills == 0 {
            return fail("n_tasks, n_workers and n_skills must be at least 1".into());
        }
        for (name, r) in [
            ("skills_per_worker", self.skills_per_worker),
            ("skills_per_task", self.skills_per_task),
        ] {
            if r.min == 0 || r.min > r.max || r.max > self.n_skills {
                return fail(format!(
                    "{name} [{}, {}] must satisfy 1 <= min <= max <= n_skills ({})",
                    r.min, r.max, self.n_skills
                ));
            }
        }
        if !self.gamma.is_finite() || self.gamma < 0.0 {
            return fail("gamma must be finite and non-negative".into());
        }
        if !self.area_side.is_finite() || self.area_side < 0.0 {
            return fail("area_side must be finite and non-negative".into());
        }
        for (name, mean, sd) in [
            ("budget", self.mean_budget, self.budget_sd()),
            ("price", self.mean_price, self.price_sd()),
        ] {
            if !mean.is_finite() || mean <= MIN_MONEY {
                return fail(format!("mean_{name} must be finite and above {MIN_MONEY}"));
            }
            if !sd.is_finite() || sd < 0.0 {
                return fail(format!("{name}_sd must be finite and non-negative"));
            }
        }
        Ok(())
    }
}

fn truncated(normal: &Normal<f64>, rng: &mut impl Rng) -> f64 {
    loop {
        let v = normal.sample(rng);
        if v > MIN_MONEY {
            return v;
        }
    }
}

fn draw_skills(rng: &mut impl Rng, n_skills: u32, range: CountRange) -> Vec<SkillId> {
    let count = rng.random_range(range.min..=range.max) as usize;
    let mut ids: Vec<SkillId> = sample(rng, n_skills as usize, count)
        .into_iter()
        .map(|i| SkillId(i as u32))
        .collect();
    ids.sort_unstable();
    ids
}

fn draw_point(rng: &mut impl Rng, side: f64) -> Point {
    Point::new(rng.random::<f64>() * side, rng.random::<f64>() * side)
}

/// Builds an instance from `params`; identical params give identical output.
pub fn generate_instance(params: &GenParams) -> Result<Instance, ParamsError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let price = Normal::new(params.mean_price, params.price_sd()).map_err(|e| ParamsError(e.to_string()))?;
    let budget =
        Normal::new(params.mean_budget, params.budget_sd()).map_err(|e| ParamsError(e.to_string()))?;

    let workers = (0..params.n_workers)
        .map(|i| {
            let location = draw_point(&mut rng, params.area_side);
            let skills = draw_skills(&mut rng, params.n_skills, params.skills_per_worker)
                .into_iter()
                .map(|skill| SkillFee {
                    skill,
                    fee: truncated(&price, &mut rng),
                })
                .collect();
            Worker {
                id: WorkerId(i),
                location,
                skills,
            }
        })
        .collect();

    let tasks = (0..params.n_tasks)
        .map(|i| {
            let location = draw_point(&mut rng, params.area_side);
            let required = SkillSet::from_sorted_unchecked(draw_skills(
                &mut rng,
                params.n_skills,
                params.skills_per_task,
            ));
            Task {
                id: TaskId(i),
                location,
                required,
                budget: truncated(&budget, &mut rng),
            }
        })
        .collect();

    Instance::new(params.n_skills, params.gamma, workers, tasks, None)
        .map_err(|e| ParamsError(format!("generated instance is invalid: {e}")))
}
