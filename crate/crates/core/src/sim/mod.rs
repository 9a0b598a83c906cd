//! Discrete-time trace replay.
//!
//! The clock advances in rounds of `round_interval` seconds. Arrivals in
//! `(t - interval, t]` are received at `t`; the policy sees them together
//! with anything deferred earlier. A placed job transfers for
//! `latency(home, region)` seconds and then holds one slot of the region
//! for its execution time. Footprints use the region's environment at the
//! start of execution.

mod metrics;
mod output;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::footprint::{
    embodied_water_total, total_carbon, total_water_with_embodied, FootprintError, JobEnergyRecord,
    RegionEnvPoint, ServerSpec,
};
use crate::ingest::{LatencyMatrix, RegionEnvSeries, SampleError, TraceEntry, WorkloadProfileDB};
use crate::sched::{
    baseline_assign, greedy_opt_plan, schedule_round, AssignmentSolution, BaselinePolicy,
    BaselineState, CapacityTimeline, GreedyError, GreedyMetric, HistoryLearner, PendingJob,
    RoundContext, SchedulerConfig,
};

pub use metrics::{check_capacity, compare, CapacityViolation, JobOutcome, RunMetrics, SavingsRow};
pub use output::{
    read_metrics, write_metrics, write_outcomes, MetricsRecord, OutputError, RunLabel,
};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("job `{job}`: unknown home region `{region}`")]
    UnknownRegion { job: String, region: String },
    #[error("job `{job}`: unknown benchmark `{benchmark}`")]
    UnknownBenchmark { job: String, benchmark: String },
    #[error("latency matrix regions {latency:?} do not match environment regions {env:?}")]
    RegionMismatch {
        latency: Vec<String>,
        env: Vec<String>,
    },
    #[error("expected {expected} slot counts, got {got}")]
    SlotCount { expected: usize, got: usize },
    #[error("region `{0}` has zero slots")]
    ZeroSlots(String),
    #[error(transparent)]
    Env(#[from] SampleError),
    #[error(transparent)]
    Footprint(#[from] FootprintError),
    #[error(transparent)]
    Greedy(#[from] GreedyError),
    #[error("baseline policy `{0}` missing from the compared runs")]
    MissingBaseline(String),
    #[error("invalid scheduler config: {0}")]
    Config(#[from] crate::sched::ConfigError),
}

/// Placement policy driving a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Home,
    RoundRobin,
    LeastLoad,
    Waterwise,
    CarbonGreedyOpt,
    WaterGreedyOpt,
}

impl Policy {
    pub const ALL: [Policy; 6] = [
        Policy::Home,
        Policy::RoundRobin,
        Policy::LeastLoad,
        Policy::Waterwise,
        Policy::CarbonGreedyOpt,
        Policy::WaterGreedyOpt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Home => "home",
            Policy::RoundRobin => "round_robin",
            Policy::LeastLoad => "least_load",
            Policy::Waterwise => "waterwise",
            Policy::CarbonGreedyOpt => "carbon_greedy_opt",
            Policy::WaterGreedyOpt => "water_greedy_opt",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Policy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Policy::ALL.iter().map(|p| p.name()).collect();
                format!(
                    "unknown policy `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

/// Validated, index-aligned inputs shared by every run.
#[derive(Debug, Clone)]
pub struct World {
    pub regions: Vec<String>,
    pub env: Vec<RegionEnvSeries>,
    pub latency: LatencyMatrix,
    pub profiles: WorkloadProfileDB,
    pub server: ServerSpec,
    pub embodied_water: f64,
}

impl World {
    pub fn new(
        env: BTreeMap<String, RegionEnvSeries>,
        latency: &LatencyMatrix,
        profiles: WorkloadProfileDB,
        server: ServerSpec,
    ) -> Result<Self, SimError> {
        let regions: Vec<String> = env.keys().cloned().collect();
        let latency = latency
            .reordered(&regions)
            .ok_or_else(|| SimError::RegionMismatch {
                latency: latency.regions().to_vec(),
                env: regions.clone(),
            })?;
        let embodied_water = embodied_water_total(&server)?;
        Ok(Self {
            regions,
            env: env.into_values().collect(),
            latency,
            profiles,
            server,
            embodied_water,
        })
    }

    pub fn region_index(&self, name: &str) -> Option<usize> {
        self.regions.iter().position(|r| r == name)
    }

    fn envs_at(&self, t: f64) -> Result<Vec<RegionEnvPoint>, SampleError> {
        self.env.iter().map(|s| s.sample(t).cloned()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub sched: SchedulerConfig,
    /// Slots per region, aligned with [`World::regions`].
    pub slots: Vec<usize>,
    /// Half-width of the uniform multiplicative noise on job energy.
    pub energy_noise: f64,
    pub seed: u64,
}

/// What the policy decided in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundSummary {
    pub at: f64,
    /// Jobs the policy was asked to place.
    pub batch: usize,
    pub placed: usize,
    /// Jobs carried into the next round.
    pub deferred: usize,
    /// Whether the delay tolerance was softened.
    pub relaxed: bool,
    /// Sum of tolerance overshoot over placed jobs.
    pub penalty: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub metrics: RunMetrics,
    /// One per job, in trace order.
    pub outcomes: Vec<JobOutcome>,
    /// Per-round decisions; empty for the offline oracles.
    pub rounds: Vec<RoundSummary>,
    /// Wall-clock seconds spent in each policy decision.
    pub decision_seconds: Vec<f64>,
}

struct SimJob {
    pending: PendingJob,
    /// Energy actually consumed, which may differ from the profiled mean.
    actual: JobEnergyRecord,
}

fn receipt_time(arrival: f64, interval: f64) -> f64 {
    (arrival / interval).ceil() * interval
}

fn prepare_jobs(
    world: &World,
    trace: &[TraceEntry],
    cfg: &SimConfig,
) -> Result<Vec<SimJob>, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    trace
        .iter()
        .enumerate()
        .map(|(seq, e)| {
            let home =
                world
                    .region_index(&e.home_region)
                    .ok_or_else(|| SimError::UnknownRegion {
                        job: e.job_id.clone(),
                        region: e.home_region.clone(),
                    })?;
            let profile =
                *world
                    .profiles
                    .get(&e.benchmark)
                    .ok_or_else(|| SimError::UnknownBenchmark {
                        job: e.job_id.clone(),
                        benchmark: e.benchmark.clone(),
                    })?;
            let factor = if cfg.energy_noise > 0.0 {
                1.0 + rng.gen_range(-cfg.energy_noise..=cfg.energy_noise)
            } else {
                1.0
            };
            Ok(SimJob {
                pending: PendingJob {
                    id: e.job_id.clone(),
                    seq,
                    home,
                    profile,
                    received_at: receipt_time(e.arrival, cfg.sched.round_interval),
                },
                actual: JobEnergyRecord {
                    energy: profile.energy * factor,
                    exec_time: profile.exec_time,
                },
            })
        })
        .collect()
}

fn outcome(
    world: &World,
    cfg: &SimConfig,
    job: &SimJob,
    region: usize,
    dispatch: f64,
) -> Result<JobOutcome, SimError> {
    let transfer = world.latency.get(job.pending.home, region);
    let start_exec = dispatch + transfer;
    let env = world.env[region].sample(start_exec)?;
    let exec_time = job.actual.exec_time;
    let finish = start_exec + exec_time;
    let service_time = finish - job.pending.received_at;
    Ok(JobOutcome {
        job_id: job.pending.id.clone(),
        seq: job.pending.seq,
        region,
        received_at: job.pending.received_at,
        start_exec,
        finish,
        service_time,
        exec_time,
        transfer,
        carbon: total_carbon(&job.actual, env.carbon_intensity, &world.server),
        water: total_water_with_embodied(&job.actual, env, &world.server, world.embodied_water),
        violated: JobOutcome::exceeds(service_time, exec_time, cfg.sched.tolerance),
    })
}

/// Replays `trace` (arrival-ordered) under `policy`.
pub fn run(
    world: &World,
    trace: &[TraceEntry],
    cfg: &SimConfig,
    policy: Policy,
) -> Result<RunOutput, SimError> {
    cfg.sched.validate()?;
    if cfg.slots.len() != world.regions.len() {
        return Err(SimError::SlotCount {
            expected: world.regions.len(),
            got: cfg.slots.len(),
        });
    }
    if let Some(i) = cfg.slots.iter().position(|&s| s == 0) {
        return Err(SimError::ZeroSlots(world.regions[i].clone()));
    }
    let jobs = prepare_jobs(world, trace, cfg)?;

    let (mut outcomes, rounds, decision_seconds) = match policy {
        Policy::CarbonGreedyOpt | Policy::WaterGreedyOpt => {
            let metric = if policy == Policy::CarbonGreedyOpt {
                GreedyMetric::Carbon
            } else {
                GreedyMetric::Water
            };
            let pending: Vec<PendingJob> = jobs.iter().map(|j| j.pending.clone()).collect();
            let started = Instant::now();
            let plan = greedy_opt_plan(
                metric,
                &pending,
                &world.env,
                &world.latency,
                &cfg.slots,
                &cfg.sched,
                &world.server,
                world.embodied_water,
            )?;
            let elapsed = started.elapsed().as_secs_f64();
            let outcomes = plan
                .iter()
                .map(|p| outcome(world, cfg, &jobs[p.job], p.region, p.dispatch))
                .collect::<Result<Vec<_>, _>>()?;
            (
                outcomes,
                Vec::new(),
                if jobs.is_empty() {
                    Vec::new()
                } else {
                    vec![elapsed]
                },
            )
        }
        _ => replay_rounds(world, &jobs, cfg, policy)?,
    };
    outcomes.sort_by_key(|o| o.seq);
    let metrics =
        RunMetrics::from_outcomes(policy.name(), &outcomes, world.regions.len(), &cfg.slots);
    Ok(RunOutput {
        metrics,
        outcomes,
        rounds,
        decision_seconds,
    })
}

/// Outcomes, round summaries and per-decision seconds.
type Replay = (Vec<JobOutcome>, Vec<RoundSummary>, Vec<f64>);

fn replay_rounds(
    world: &World,
    jobs: &[SimJob],
    cfg: &SimConfig,
    policy: Policy,
) -> Result<Replay, SimError> {
    let interval = cfg.sched.round_interval;
    let regions = world.regions.len();
    let mut timeline = CapacityTimeline::new(cfg.slots.clone());
    let mut history = HistoryLearner::new(cfg.sched.history_window, regions);
    let mut baseline_state = BaselineState::default();
    let mut outcomes = Vec::with_capacity(jobs.len());
    let mut rounds = Vec::new();
    let mut decision_seconds = Vec::new();
    let mut carry: Vec<PendingJob> = Vec::new();
    let mut next = 0;
    let mut now = match jobs.first() {
        Some(j) => j.pending.received_at,
        None => return Ok((outcomes, rounds, decision_seconds)),
    };

    while next < jobs.len() || !carry.is_empty() {
        if carry.is_empty() {
            now = now.max(jobs[next].pending.received_at);
        }
        timeline.release_until(now);
        let mut arrivals = Vec::new();
        while next < jobs.len() && jobs[next].pending.received_at <= now {
            arrivals.push(jobs[next].pending.clone());
            next += 1;
        }
        let capacity: Vec<usize> = (0..regions).map(|n| timeline.free_from(n, now)).collect();

        let started = Instant::now();
        let (batch, solution, deferred) = match policy {
            Policy::Waterwise => {
                let envs = world.envs_at(now)?;
                let ctx = RoundContext {
                    envs: &envs,
                    latency: &world.latency,
                    server: &world.server,
                    embodied_water: world.embodied_water,
                    now,
                };
                let d = schedule_round(
                    arrivals,
                    std::mem::take(&mut carry),
                    &ctx,
                    &capacity,
                    &cfg.sched,
                    &mut history,
                );
                (d.jobs, d.solution, d.deferred)
            }
            Policy::Home | Policy::RoundRobin | Policy::LeastLoad => {
                let rule = match policy {
                    Policy::Home => BaselinePolicy::Home,
                    Policy::RoundRobin => BaselinePolicy::RoundRobin,
                    _ => BaselinePolicy::LeastLoad,
                };
                let mut batch = std::mem::take(&mut carry);
                batch.extend(arrivals);
                let s = baseline_assign(rule, &batch, &capacity, &mut baseline_state);
                (batch, s, Vec::new())
            }
            Policy::CarbonGreedyOpt | Policy::WaterGreedyOpt => unreachable!("planned offline"),
        };
        decision_seconds.push(started.elapsed().as_secs_f64());

        carry = deferred;
        apply(
            world,
            cfg,
            jobs,
            &batch,
            &solution,
            now,
            &mut timeline,
            &mut outcomes,
            &mut carry,
        )?;
        rounds.push(RoundSummary {
            at: now,
            batch: batch.len(),
            placed: solution.placement.iter().flatten().count(),
            deferred: carry.len(),
            relaxed: solution.relaxed,
            penalty: solution.penalties.iter().sum(),
        });
        now += interval;
    }
    Ok((outcomes, rounds, decision_seconds))
}

#[allow(clippy::too_many_arguments)]
fn apply(
    world: &World,
    cfg: &SimConfig,
    jobs: &[SimJob],
    batch: &[PendingJob],
    solution: &AssignmentSolution,
    now: f64,
    timeline: &mut CapacityTimeline,
    outcomes: &mut Vec<JobOutcome>,
    carry: &mut Vec<PendingJob>,
) -> Result<(), SimError> {
    for (job, placed) in batch.iter().zip(&solution.placement) {
        match *placed {
            Some(region) => {
                let o = outcome(world, cfg, &jobs[job.seq], region, now)?;
                timeline.reserve(region, o.start_exec, o.finish);
                outcomes.push(o);
            }
            None => carry.push(job.clone()),
        }
    }
    Ok(())
}
