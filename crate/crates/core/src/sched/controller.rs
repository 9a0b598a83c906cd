use super::{
    build_problem, select_priority, solve_hard, solve_soft, AssignmentSolution, HistoryLearner,
    PendingJob, RoundContext, SchedulerConfig,
};

/// Outcome of one decision round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundDecision {
    /// Jobs that were solved this round, aligned with `solution.placement`.
    pub jobs: Vec<PendingJob>,
    pub solution: AssignmentSolution,
    /// Jobs carried over to the next round.
    pub deferred: Vec<PendingJob>,
}

/// One round of the co-optimizing controller.
///
/// Pending and new jobs are pooled. If they outnumber the free slots, the
/// most urgent ones fill the slots and are placed with the relaxed solver.
/// Otherwise the hard solver runs first and the relaxed solver only on
/// infeasibility. The history learner is fed the round's per-region
/// footprints before returning.
pub fn schedule_round(
    new_jobs: Vec<PendingJob>,
    carryover: Vec<PendingJob>,
    ctx: &RoundContext<'_>,
    capacity: &[usize],
    cfg: &SchedulerConfig,
    history: &mut HistoryLearner,
) -> RoundDecision {
    let mut all = carryover;
    all.extend(new_jobs);
    if all.is_empty() {
        return RoundDecision {
            jobs: Vec::new(),
            solution: AssignmentSolution::empty(),
            deferred: Vec::new(),
        };
    }

    let slots: usize = capacity.iter().sum();
    let (batch, deferred, over_capacity) = if all.len() > slots {
        let (sel, def) = select_priority(all, slots, ctx.latency, cfg, ctx.now);
        (sel, def, true)
    } else {
        (all, Vec::new(), false)
    };
    if batch.is_empty() {
        return RoundDecision {
            jobs: batch,
            solution: AssignmentSolution::empty(),
            deferred,
        };
    }

    let problem = build_problem(&batch, ctx, capacity, cfg, history);
    let solution = if over_capacity {
        solve_soft(&problem)
    } else {
        solve_hard(&problem).unwrap_or_else(|_| solve_soft(&problem))
    };

    let n = problem.regions;
    let mut carbon = vec![0.0; n];
    let mut water = vec![0.0; n];
    for m in 0..problem.job_count() {
        for r in 0..n {
            carbon[r] += problem.carbon[problem.at(m, r)];
            water[r] += problem.water[problem.at(m, r)];
        }
    }
    history.push(&carbon, &water);

    RoundDecision {
        jobs: batch,
        solution,
        deferred,
    }
}
