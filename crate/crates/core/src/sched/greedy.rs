//! Single-metric oracles with perfect knowledge of future intensities.
//!
//! Jobs are taken in arrival order. Each one is given the cheapest
//! (region, start round) pair whose queueing plus transfer delay stays
//! inside its tolerance budget and for which a slot is free over the whole
//! execution, considering reservations of the jobs placed before it.
//!
//! Because reservations interact, a larger budget can make this single
//! pass worse. [`greedy_opt_plan`] therefore searches the pass over a
//! nested ladder of budget caps and keeps the cheapest plan, so on ladder
//! tolerances the result never gets worse as the tolerance grows.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::footprint::{total_carbon, total_water_with_embodied, ServerSpec};
use crate::ingest::{LatencyMatrix, RegionEnvSeries};

use super::{PendingJob, SchedulerConfig, FEASIBILITY_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyMetric {
    Carbon,
    Water,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GreedyError {
    #[error("job `{job}`: no region has a free slot before the environment data ends")]
    NoSlot { job: String },
}

/// Where and when the oracle runs one job.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyPlacement {
    /// Index into the input job slice.
    pub job: usize,
    pub region: usize,
    /// Round boundary at which the job is dispatched.
    pub dispatch: f64,
    pub start_exec: f64,
    /// False when no slot within the tolerance budget was free.
    pub within_budget: bool,
}

/// Reserved execution intervals per region, used to check slot
/// availability at arbitrary future times.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityTimeline {
    slots: Vec<usize>,
    /// Half-open `[start, end)` intervals sorted by start.
    intervals: Vec<Vec<(f64, f64)>>,
    longest: f64,
}

impl CapacityTimeline {
    pub fn new(slots: Vec<usize>) -> Self {
        let n = slots.len();
        Self {
            slots,
            intervals: vec![Vec::new(); n],
            longest: 0.0,
        }
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    /// Highest number of simultaneously reserved slots within `[from, to)`.
    pub fn peak(&self, region: usize, from: f64, to: f64) -> usize {
        let list = &self.intervals[region];
        let lo = list.partition_point(|&(s, _)| s < from - self.longest);
        let hi = list.partition_point(|&(s, _)| s < to);
        let mut events: Vec<(f64, i32)> = Vec::new();
        for &(s, e) in &list[lo..hi] {
            if e > from {
                events.push((s.max(from), 1));
                events.push((e, -1));
            }
        }
        // ends sort before starts at the same instant
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut cur = 0i32;
        let mut peak = 0i32;
        for (_, d) in events {
            cur += d;
            peak = peak.max(cur);
        }
        peak as usize
    }

    pub fn fits(&self, region: usize, start: f64, end: f64) -> bool {
        self.peak(region, start, end) < self.slots[region]
    }

    /// Free slots that stay free from `now` on.
    pub fn free_from(&self, region: usize, now: f64) -> usize {
        self.slots[region].saturating_sub(self.peak(region, now, f64::INFINITY))
    }

    pub fn reserve(&mut self, region: usize, start: f64, end: f64) {
        let list = &mut self.intervals[region];
        let at = list.partition_point(|&(s, _)| s <= start);
        list.insert(at, (start, end));
        self.longest = self.longest.max(end - start);
    }

    /// Latest reservation end, or negative infinity when empty.
    pub fn last_end(&self) -> f64 {
        self.intervals
            .iter()
            .flatten()
            .map(|&(_, e)| e)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Drops intervals that ended at or before `t`.
    pub fn release_until(&mut self, t: f64) {
        for list in &mut self.intervals {
            list.retain(|&(_, e)| e > t);
        }
    }
}

/// Plans every job with future knowledge, minimizing one metric per job.
///
/// `jobs` must be in arrival order, each `received_at` a round boundary.
/// `envs` and `latency` are index-aligned by region.
#[allow(clippy::too_many_arguments)]
pub fn greedy_opt_assign(
    metric: GreedyMetric,
    jobs: &[PendingJob],
    envs: &[RegionEnvSeries],
    latency: &LatencyMatrix,
    slots: &[usize],
    cfg: &SchedulerConfig,
    server: &ServerSpec,
    embodied_water: f64,
) -> Result<Vec<GreedyPlacement>, GreedyError> {
    let regions = envs.len();
    let horizon = envs.iter().map(|s| s.last_timestamp()).max().unwrap_or(0) as f64;
    let mut timeline = CapacityTimeline::new(slots.to_vec());
    let mut plan = Vec::with_capacity(jobs.len());

    for (idx, job) in jobs.iter().enumerate() {
        let exec = job.effective_exec();
        let budget = cfg.tolerance * exec;
        let footprint = |region: usize, start: f64| -> Option<f64> {
            let env = envs[region].sample(start).ok()?;
            Some(match metric {
                GreedyMetric::Carbon => total_carbon(&job.profile, env.carbon_intensity, server),
                GreedyMetric::Water => {
                    total_water_with_embodied(&job.profile, env, server, embodied_water)
                }
            })
        };

        let mut candidates: Vec<(f64, f64, usize, f64)> = Vec::new();
        let mut k = 0u32;
        loop {
            let dispatch = job.received_at + f64::from(k) * cfg.round_interval;
            let queued = dispatch - job.received_at;
            if queued > budget + FEASIBILITY_EPS {
                break;
            }
            for n in 0..regions {
                let transfer = latency.get(job.home, n);
                if queued + transfer > budget + FEASIBILITY_EPS {
                    continue;
                }
                let start = dispatch + transfer;
                if let Some(fp) = footprint(n, start) {
                    candidates.push((fp, start, n, dispatch));
                }
            }
            k += 1;
        }
        candidates.sort_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.total_cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });

        let chosen = candidates
            .iter()
            .find(|&&(_, start, n, _)| timeline.fits(n, start, start + exec))
            .map(|&(_, start, n, dispatch)| (n, start, dispatch, true));

        let chosen = match chosen {
            Some(c) => Some(c),
            None => {
                // earliest slot anywhere, ignoring the budget;
                // past both the data horizon and every reservation a slot is free
                let limit = horizon.max(timeline.last_end()) + cfg.round_interval;
                let mut found = None;
                let mut k = 0u32;
                while found.is_none() {
                    let dispatch = job.received_at + f64::from(k) * cfg.round_interval;
                    if dispatch > limit {
                        break;
                    }
                    found = (0..regions)
                        .map(|n| (dispatch + latency.get(job.home, n), n))
                        .filter(|&(start, n)| {
                            envs[n].sample(start).is_ok() && timeline.fits(n, start, start + exec)
                        })
                        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
                        .map(|(start, n)| (n, start, dispatch, false));
                    k += 1;
                }
                found
            }
        };
        let (region, start_exec, dispatch, within_budget) =
            chosen.ok_or_else(|| GreedyError::NoSlot {
                job: job.id.clone(),
            })?;
        timeline.reserve(region, start_exec, start_exec + exec);
        plan.push(GreedyPlacement {
            job: idx,
            region,
            dispatch,
            start_exec,
            within_budget,
        });
    }
    Ok(plan)
}

/// Spacing of the budget-cap ladder searched by [`greedy_opt_plan`].
pub const BUDGET_LADDER_STEP: f64 = 0.05;

/// Best single pass of [`greedy_opt_assign`] over the tolerance caps
/// `0, step, 2 step, ...` below `cfg.tolerance`, plus `cfg.tolerance`
/// itself. Plans are ranked by the number of jobs exceeding the
/// `cfg.tolerance` budget, then by planned total footprint, then by the
/// smaller cap.
#[allow(clippy::too_many_arguments)]
pub fn greedy_opt_plan(
    metric: GreedyMetric,
    jobs: &[PendingJob],
    envs: &[RegionEnvSeries],
    latency: &LatencyMatrix,
    slots: &[usize],
    cfg: &SchedulerConfig,
    server: &ServerSpec,
    embodied_water: f64,
) -> Result<Vec<GreedyPlacement>, GreedyError> {
    let mut caps: Vec<f64> = (0u32..)
        .map(|k| f64::from(k) * BUDGET_LADDER_STEP)
        .take_while(|&c| c < cfg.tolerance - FEASIBILITY_EPS)
        .collect();
    caps.push(cfg.tolerance);

    let mut best: Option<((usize, f64), Vec<GreedyPlacement>)> = None;
    for cap in caps {
        let capped = SchedulerConfig {
            tolerance: cap,
            ..cfg.clone()
        };
        let plan = greedy_opt_assign(
            metric,
            jobs,
            envs,
            latency,
            slots,
            &capped,
            server,
            embodied_water,
        )?;
        let mut over = 0;
        let mut total = 0.0;
        for p in &plan {
            let job = &jobs[p.job];
            let delay = p.start_exec - job.received_at;
            if delay > cfg.tolerance * job.effective_exec() + FEASIBILITY_EPS {
                over += 1;
            }
            let env = envs[p.region]
                .sample(p.start_exec)
                .expect("planned start has data");
            total += match metric {
                GreedyMetric::Carbon => total_carbon(&job.profile, env.carbon_intensity, server),
                GreedyMetric::Water => {
                    total_water_with_embodied(&job.profile, env, server, embodied_water)
                }
            };
        }
        let better = match &best {
            None => true,
            Some(((o, t), _)) => over < *o || (over == *o && total < *t),
        };
        if better {
            best = Some(((over, total), plan));
        }
    }
    Ok(best.map(|(_, p)| p).unwrap_or_default())
}
