use crate::ingest::LatencyMatrix;

use super::{PendingJob, SchedulerConfig, UrgencyMode};

/// Remaining slack of a queued job in seconds; smaller is more urgent.
///
/// `tolerance * exec_time - mean_latency(home -> all regions) - waited`,
/// where the mean includes the zero self-latency.
pub fn urgency(job: &PendingJob, latency: &LatencyMatrix, cfg: &SchedulerConfig, now: f64) -> f64 {
    let n = latency.regions().len();
    let avg = if n == 0 {
        0.0
    } else {
        (0..n).map(|r| latency.get(job.home, r)).sum::<f64>() / n as f64
    };
    let budget = cfg.tolerance * job.effective_exec() - avg;
    match cfg.urgency_mode {
        UrgencyMode::Slack => budget - job.waited(now),
        UrgencyMode::Literal => budget + job.waited(now),
    }
}

/// Splits `jobs` into the `k` most urgent and the rest. Ties go to the job
/// received earlier, then to the earlier trace position.
pub fn select_priority(
    jobs: Vec<PendingJob>,
    k: usize,
    latency: &LatencyMatrix,
    cfg: &SchedulerConfig,
    now: f64,
) -> (Vec<PendingJob>, Vec<PendingJob>) {
    let mut scored: Vec<(f64, PendingJob)> = jobs
        .into_iter()
        .map(|j| (urgency(&j, latency, cfg, now), j))
        .collect();
    scored.sort_by(|(a, ja), (b, jb)| {
        a.total_cmp(b)
            .then(ja.received_at.total_cmp(&jb.received_at))
            .then(ja.seq.cmp(&jb.seq))
    });
    let mut selected: Vec<PendingJob> = scored.into_iter().map(|(_, j)| j).collect();
    let deferred = selected.split_off(k.min(selected.len()));
    (selected, deferred)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::footprint::JobEnergyRecord;

    fn job(seq: usize, exec: f64, received_at: f64) -> PendingJob {
        PendingJob {
            id: format!("j{seq}"),
            seq,
            home: 0,
            profile: JobEnergyRecord {
                energy: 1.0,
                exec_time: exec,
            },
            received_at,
        }
    }

    fn lat(avg: f64) -> LatencyMatrix {
        // home row [0, 2*avg] averages to `avg`
        LatencyMatrix::from_rows(
            vec!["a".into(), "b".into()],
            vec![0.0, 2.0 * avg, 2.0 * avg, 0.0],
        )
        .unwrap()
    }

    #[test]
    fn urgency_examples() {
        let cfg = SchedulerConfig {
            tolerance: 0.25,
            ..Default::default()
        };
        assert_eq!(urgency(&job(0, 100.0, 0.0), &lat(10.0), &cfg, 5.0), 10.0);
        assert_eq!(urgency(&job(0, 100.0, 0.0), &lat(0.0), &cfg, 0.0), 25.0);
        let early = job(0, 100.0, 0.0);
        let late = job(1, 100.0, 50.0);
        assert!(urgency(&early, &lat(10.0), &cfg, 60.0) < urgency(&late, &lat(10.0), &cfg, 60.0));

        let literal = SchedulerConfig {
            urgency_mode: UrgencyMode::Literal,
            ..cfg
        };
        assert_eq!(
            urgency(&job(0, 100.0, 0.0), &lat(10.0), &literal, 5.0),
            20.0
        );
    }

    #[test]
    fn selection() {
        let cfg = SchedulerConfig {
            tolerance: 1.0,
            ..Default::default()
        };
        let l = lat(0.0);
        // scores 10, 3, 7
        let jobs = vec![job(0, 10.0, 0.0), job(1, 3.0, 0.0), job(2, 7.0, 0.0)];
        let (sel, def) = select_priority(jobs.clone(), 2, &l, &cfg, 0.0);
        let ids: Vec<_> = sel.iter().map(|j| j.seq).collect();
        assert_eq!(ids, [1, 2]);
        assert_eq!(def.len(), 1);
        assert_eq!(def[0].seq, 0);

        let (sel, def) = select_priority(jobs, 3, &l, &cfg, 0.0);
        assert_eq!(sel.len(), 3);
        assert!(def.is_empty());

        // equal scores at `now`: earlier arrival first
        let a = job(5, 10.0, 100.0);
        let b = job(4, 10.0, 100.0);
        let (sel, _) = select_priority(vec![a, b], 1, &l, &cfg, 100.0);
        assert_eq!(sel[0].seq, 4);
    }
}
