//! Decision controller: per-round assignment problems, exact hard and soft
//! solvers, slack management, history learner and the baseline policies.

mod baseline;
mod controller;
mod flow;
mod greedy;
mod history;
mod problem;
mod slack;
mod solve;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::footprint::{JobEnergyRecord, RegionEnvPoint, ServerSpec};
use crate::ingest::LatencyMatrix;

pub use baseline::{baseline_assign, BaselinePolicy, BaselineState};
pub use controller::{schedule_round, RoundDecision};
pub use flow::min_cost_assignment;
pub use greedy::{
    greedy_opt_assign, greedy_opt_plan, CapacityTimeline, GreedyError, GreedyMetric,
    GreedyPlacement, BUDGET_LADDER_STEP,
};
pub use history::HistoryLearner;
pub use problem::{build_problem, job_max_footprints, AssignmentProblem};
pub use slack::{select_priority, urgency};
pub use solve::{solve_hard, solve_soft, AssignmentSolution, Infeasible};

/// Which form of the delay-tolerance test is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayMode {
    /// `(latency + waited) / exec_time <= tolerance`: queuing consumes budget.
    #[default]
    Effective,
    /// `latency / exec_time <= tolerance`.
    Literal,
}

/// Sign of the waiting term in the urgency score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UrgencyMode {
    /// Waiting shrinks the remaining slack.
    #[default]
    Slack,
    /// `+ (now - received_at)`.
    Literal,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("lambda_co2 + lambda_h2o must be 1, got {0}")]
    LambdaSum(f64),
    #[error("`{field}` = {value} is out of range ({rule})")]
    Range {
        field: &'static str,
        value: f64,
        rule: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchedulerConfig {
    pub lambda_co2: f64,
    pub lambda_h2o: f64,
    /// Weight of the history term.
    pub lambda_ref: f64,
    /// Rounds kept by the history learner.
    pub history_window: usize,
    /// Allowed fractional increase of service time over execution time.
    pub tolerance: f64,
    /// Penalty weight per unit of tolerance overshoot in relaxed rounds.
    pub sigma: f64,
    /// Seconds between decision rounds.
    pub round_interval: f64,
    pub delay_mode: DelayMode,
    pub urgency_mode: UrgencyMode,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        Self {
            lambda_co2: 0.5,
            lambda_h2o: 0.5,
            lambda_ref: 0.1,
            history_window: 10,
            tolerance: 0.5,
            sigma: 10.0,
            round_interval: 300.0,
            delay_mode: DelayMode::Effective,
            urgency_mode: UrgencyMode::Slack,
        }
    }
}

impl SchedulerConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let range = |field, value: f64, ok: bool, rule| {
            if ok {
                Ok(())
            } else {
                Err(ConfigError::Range { field, value, rule })
            }
        };
        range(
            "lambda_co2",
            self.lambda_co2,
            (0.0..=1.0).contains(&self.lambda_co2),
            "[0, 1]",
        )?;
        range(
            "lambda_h2o",
            self.lambda_h2o,
            (0.0..=1.0).contains(&self.lambda_h2o),
            "[0, 1]",
        )?;
        let sum = self.lambda_co2 + self.lambda_h2o;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(ConfigError::LambdaSum(sum));
        }
        range(
            "lambda_ref",
            self.lambda_ref,
            self.lambda_ref >= 0.0,
            ">= 0",
        )?;
        range(
            "history_window",
            self.history_window as f64,
            self.history_window >= 1,
            ">= 1",
        )?;
        range("tolerance", self.tolerance, self.tolerance >= 0.0, ">= 0")?;
        range("sigma", self.sigma, self.sigma >= 0.0, ">= 0")?;
        range(
            "round_interval",
            self.round_interval,
            self.round_interval > 0.0 && self.round_interval.is_finite(),
            "> 0",
        )?;
        Ok(())
    }
}

/// A job waiting for a placement decision.
#[derive(Debug, Clone, PartialEq)]
pub struct PendingJob {
    pub id: String,
    /// Position in the arrival-ordered trace; breaks ties between equal jobs.
    pub seq: usize,
    /// Index of the home region.
    pub home: usize,
    /// Mean profile the controller plans with.
    pub profile: JobEnergyRecord,
    /// When the controller first received the job.
    pub received_at: f64,
}

impl PendingJob {
    pub fn waited(&self, now: f64) -> f64 {
        (now - self.received_at).max(0.0)
    }

    /// Execution time, identical in every region.
    pub fn effective_exec(&self) -> f64 {
        self.profile.exec_time
    }
}

/// Everything about the world a round's decision depends on, with regions
/// index-aligned between `envs` and `latency`.
#[derive(Debug, Clone, Copy)]
pub struct RoundContext<'a> {
    pub envs: &'a [RegionEnvPoint],
    pub latency: &'a LatencyMatrix,
    pub server: &'a ServerSpec,
    /// Precomputed embodied water of one server, liters.
    pub embodied_water: f64,
    pub now: f64,
}

impl RoundContext<'_> {
    pub fn regions(&self) -> usize {
        self.envs.len()
    }
}

/// Tolerance-budget ratio of placing `job` in `region` at `now`.
pub(crate) fn delay_ratio(
    job: &PendingJob,
    region: usize,
    latency: &LatencyMatrix,
    cfg: &SchedulerConfig,
    now: f64,
) -> f64 {
    let transfer = latency.get(job.home, region);
    let numer = match cfg.delay_mode {
        DelayMode::Effective => transfer + job.waited(now),
        DelayMode::Literal => transfer,
    };
    numer / job.effective_exec()
}

/// Slack for float noise in tolerance comparisons.
pub(crate) const FEASIBILITY_EPS: f64 = 1e-12;
