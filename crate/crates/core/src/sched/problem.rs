use crate::footprint::{total_carbon, total_water_with_embodied, water_intensity};

use super::{
    delay_ratio, HistoryLearner, PendingJob, RoundContext, SchedulerConfig, FEASIBILITY_EPS,
};

/// One round's assignment instance. All matrices are row-major `jobs x regions`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentProblem {
    pub jobs: Vec<PendingJob>,
    pub regions: usize,
    /// Normalized, dimensionless placement cost.
    pub cost: Vec<f64>,
    /// Hard delay-tolerance feasibility.
    pub feasible: Vec<bool>,
    /// Tolerance-budget usage of each placement (compared against `tolerance`).
    pub delay_ratio: Vec<f64>,
    pub tolerance: f64,
    pub capacity: Vec<usize>,
    pub penalty_weight: f64,
    /// Raw footprints behind the costs, gCO₂ and liters.
    pub carbon: Vec<f64>,
    pub water: Vec<f64>,
}

impl AssignmentProblem {
    /// Instance from explicit matrices, without footprint data.
    pub fn from_matrices(
        regions: usize,
        cost: Vec<f64>,
        delay_ratio: Vec<f64>,
        tolerance: f64,
        capacity: Vec<usize>,
        penalty_weight: f64,
    ) -> Self {
        assert!(regions > 0 && cost.len().is_multiple_of(regions));
        assert_eq!(cost.len(), delay_ratio.len());
        let jobs = cost.len() / regions;
        let feasible = delay_ratio
            .iter()
            .map(|&r| r <= tolerance + FEASIBILITY_EPS)
            .collect();
        Self {
            jobs: (0..jobs)
                .map(|m| PendingJob {
                    id: format!("j{m}"),
                    seq: m,
                    home: 0,
                    profile: crate::footprint::JobEnergyRecord {
                        energy: 0.0,
                        exec_time: 1.0,
                    },
                    received_at: 0.0,
                })
                .collect(),
            regions,
            cost,
            feasible,
            delay_ratio,
            tolerance,
            capacity,
            penalty_weight,
            carbon: vec![0.0; jobs * regions],
            water: vec![0.0; jobs * regions],
        }
    }

    pub fn job_count(&self) -> usize {
        self.jobs.len()
    }

    pub fn at(&self, job: usize, region: usize) -> usize {
        job * self.regions + region
    }

    /// Tolerance overshoot of a placement, zero when within budget.
    pub fn overshoot(&self, job: usize, region: usize) -> f64 {
        (self.delay_ratio[self.at(job, region)] - self.tolerance).max(0.0)
    }

    pub fn total_capacity(&self) -> usize {
        self.capacity.iter().sum()
    }
}

/// Largest carbon and water footprint the job could incur this round: its
/// footprint in the region of highest carbon intensity and in the region of
/// highest water intensity respectively.
pub fn job_max_footprints(job: &PendingJob, ctx: &RoundContext<'_>) -> (f64, f64) {
    let by = |key: fn(&crate::footprint::RegionEnvPoint) -> f64| {
        ctx.envs
            .iter()
            .max_by(|a, b| key(a).total_cmp(&key(b)))
            .expect("at least one region")
    };
    let dirtiest = by(|e| e.carbon_intensity);
    let thirstiest = by(water_intensity);
    (
        total_carbon(&job.profile, dirtiest.carbon_intensity, ctx.server),
        total_water_with_embodied(&job.profile, thirstiest, ctx.server, ctx.embodied_water),
    )
}

fn normalized(value: f64, max: f64) -> f64 {
    if max > 0.0 {
        value / max
    } else {
        0.0
    }
}

/// Builds the round's cost matrix, feasibility mask and capacities.
pub fn build_problem(
    batch: &[PendingJob],
    ctx: &RoundContext<'_>,
    capacity: &[usize],
    cfg: &SchedulerConfig,
    history: &HistoryLearner,
) -> AssignmentProblem {
    let regions = ctx.regions();
    assert_eq!(capacity.len(), regions);
    let refs = history.refs();
    let history_term: Vec<f64> = (0..regions)
        .map(|n| {
            let (c, w) = refs.get(n).copied().unwrap_or((0.0, 0.0));
            cfg.lambda_ref * (cfg.lambda_co2 * c + cfg.lambda_h2o * w)
        })
        .collect();

    let size = batch.len() * regions;
    let mut cost = Vec::with_capacity(size);
    let mut feasible = Vec::with_capacity(size);
    let mut ratios = Vec::with_capacity(size);
    let mut carbon = Vec::with_capacity(size);
    let mut water = Vec::with_capacity(size);
    for job in batch {
        let (co2_max, h2o_max) = job_max_footprints(job, ctx);
        for (n, env) in ctx.envs.iter().enumerate() {
            let c = total_carbon(&job.profile, env.carbon_intensity, ctx.server);
            let w = total_water_with_embodied(&job.profile, env, ctx.server, ctx.embodied_water);
            cost.push(
                cfg.lambda_co2 * normalized(c, co2_max)
                    + cfg.lambda_h2o * normalized(w, h2o_max)
                    + history_term[n],
            );
            let r = delay_ratio(job, n, ctx.latency, cfg, ctx.now);
            feasible.push(r <= cfg.tolerance + FEASIBILITY_EPS);
            ratios.push(r);
            carbon.push(c);
            water.push(w);
        }
    }
    AssignmentProblem {
        jobs: batch.to_vec(),
        regions,
        cost,
        feasible,
        delay_ratio: ratios,
        tolerance: cfg.tolerance,
        capacity: capacity.to_vec(),
        penalty_weight: cfg.sigma,
        carbon,
        water,
    }
}
