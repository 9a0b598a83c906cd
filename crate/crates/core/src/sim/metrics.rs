use serde::Serialize;

use super::SimError;

/// Relative slack on the violation test so exact-budget jobs are not
/// flagged by float noise.
const VIOLATION_EPS: f64 = 1e-9;

/// What happened to one job.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobOutcome {
    pub job_id: String,
    /// Trace position.
    #[serde(skip)]
    pub seq: usize,
    pub region: usize,
    pub received_at: f64,
    pub start_exec: f64,
    pub finish: f64,
    pub service_time: f64,
    pub exec_time: f64,
    pub transfer: f64,
    pub carbon: f64,
    pub water: f64,
    pub violated: bool,
}

impl JobOutcome {
    pub fn exceeds(service_time: f64, exec_time: f64, tolerance: f64) -> bool {
        service_time > (1.0 + tolerance) * exec_time * (1.0 + VIOLATION_EPS)
    }

    pub fn normalized_service(&self) -> f64 {
        self.service_time / self.exec_time
    }
}

/// Aggregates of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetrics {
    pub policy: String,
    pub jobs: usize,
    pub total_carbon: f64,
    pub total_water: f64,
    pub region_counts: Vec<usize>,
    pub mean_norm_service: f64,
    pub violation_fraction: f64,
    /// Busy slot-seconds over available slot-seconds between the first
    /// receipt and the last completion.
    pub utilization: f64,
}

impl RunMetrics {
    pub fn from_outcomes(
        policy: &str,
        outcomes: &[JobOutcome],
        regions: usize,
        slots: &[usize],
    ) -> Self {
        let mut region_counts = vec![0; regions];
        let mut total_carbon = 0.0;
        let mut total_water = 0.0;
        let mut norm = 0.0;
        let mut violations = 0usize;
        let mut busy = 0.0;
        for o in outcomes {
            region_counts[o.region] += 1;
            total_carbon += o.carbon;
            total_water += o.water;
            norm += o.normalized_service();
            violations += usize::from(o.violated);
            busy += o.exec_time;
        }
        let jobs = outcomes.len();
        let frac = |x: f64| if jobs == 0 { 0.0 } else { x / jobs as f64 };
        let first = outcomes
            .iter()
            .map(|o| o.received_at)
            .fold(f64::INFINITY, f64::min);
        let last = outcomes
            .iter()
            .map(|o| o.finish)
            .fold(f64::NEG_INFINITY, f64::max);
        let total_slots: usize = slots.iter().sum();
        let span = last - first;
        let utilization = if jobs == 0 || span <= 0.0 || total_slots == 0 {
            0.0
        } else {
            busy / (span * total_slots as f64)
        };
        Self {
            policy: policy.to_string(),
            jobs,
            total_carbon,
            total_water,
            region_counts,
            mean_norm_service: frac(norm),
            violation_fraction: frac(violations as f64),
            utilization,
        }
    }
}

/// One policy's standing against the baseline. Savings are `None` when the
/// baseline total is zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SavingsRow {
    pub policy: String,
    pub carbon_savings_pct: Option<f64>,
    pub water_savings_pct: Option<f64>,
    pub violation_pct: f64,
    pub mean_norm_service: f64,
}

fn savings(value: f64, baseline: f64) -> Option<f64> {
    (baseline != 0.0).then(|| 100.0 * (1.0 - value / baseline))
}

/// Savings of every run relative to the run named `baseline`.
pub fn compare(runs: &[RunMetrics], baseline: &str) -> Result<Vec<SavingsRow>, SimError> {
    let base = runs
        .iter()
        .find(|r| r.policy == baseline)
        .ok_or_else(|| SimError::MissingBaseline(baseline.to_string()))?;
    Ok(runs
        .iter()
        .map(|r| SavingsRow {
            policy: r.policy.clone(),
            carbon_savings_pct: savings(r.total_carbon, base.total_carbon),
            water_savings_pct: savings(r.total_water, base.total_water),
            violation_pct: 100.0 * r.violation_fraction,
            mean_norm_service: r.mean_norm_service,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityViolation {
    pub region: usize,
    pub time: f64,
    pub running: usize,
    pub slots: usize,
}

/// Replays execution intervals and reports the first instant where a
/// region runs more jobs than it has slots.
pub fn check_capacity(outcomes: &[JobOutcome], slots: &[usize]) -> Result<(), CapacityViolation> {
    for (region, &cap) in slots.iter().enumerate() {
        let mut events: Vec<(f64, i32)> = outcomes
            .iter()
            .filter(|o| o.region == region)
            .flat_map(|o| [(o.start_exec, 1), (o.finish, -1)])
            .collect();
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut running = 0i32;
        for (time, d) in events {
            running += d;
            if running as usize > cap {
                return Err(CapacityViolation {
                    region,
                    time,
                    running: running as usize,
                    slots: cap,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metrics(policy: &str, carbon: f64, water: f64) -> RunMetrics {
        RunMetrics {
            policy: policy.into(),
            jobs: 1,
            total_carbon: carbon,
            total_water: water,
            region_counts: vec![1],
            mean_norm_service: 1.0,
            violation_fraction: 0.0,
            utilization: 0.1,
        }
    }

    #[test]
    fn compare_examples() {
        let rows = compare(
            &[
                metrics("home", 100.0, 50.0),
                metrics("waterwise", 79.0, 50.0),
            ],
            "home",
        )
        .unwrap();
        assert_eq!(rows[0].carbon_savings_pct, Some(0.0));
        assert_eq!(rows[0].water_savings_pct, Some(0.0));
        assert!((rows[1].carbon_savings_pct.unwrap() - 21.0).abs() < 1e-9);

        let rows = compare(&[metrics("home", 0.0, 0.0), metrics("x", 1.0, 1.0)], "home").unwrap();
        assert_eq!(rows[1].carbon_savings_pct, None);
        assert_eq!(rows[1].water_savings_pct, None);

        assert!(matches!(
            compare(&[metrics("x", 1.0, 1.0)], "home"),
            Err(SimError::MissingBaseline(_))
        ));
    }

    #[test]
    fn violation_definition() {
        assert!(!JobOutcome::exceeds(125.0, 100.0, 0.25));
        assert!(JobOutcome::exceeds(130.0, 100.0, 0.25));
    }

    fn o(region: usize, s: f64, e: f64) -> JobOutcome {
        JobOutcome {
            job_id: String::new(),
            seq: 0,
            region,
            received_at: s,
            start_exec: s,
            finish: e,
            service_time: e - s,
            exec_time: e - s,
            transfer: 0.0,
            carbon: 0.0,
            water: 0.0,
            violated: false,
        }
    }

    #[test]
    fn capacity_replay() {
        let outs = [o(0, 0.0, 10.0), o(0, 10.0, 20.0), o(0, 5.0, 8.0)];
        assert!(check_capacity(&outs, &[2]).is_ok());
        assert!(check_capacity(&outs, &[1]).is_err());
    }
}
