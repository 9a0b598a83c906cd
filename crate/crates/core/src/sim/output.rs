//! `outcomes.csv` and `metrics.csv` writers and the metrics reader.
//!
//! outcomes.csv: `policy,tolerance,capacity_scale,job_id,region,received_at,
//! start_exec,finish,service_time,exec_time,transfer,carbon_g,water_l,violated`
//!
//! metrics.csv: `policy,tolerance,capacity_scale,jobs,total_carbon_g,
//! total_water_l,carbon_savings_pct,water_savings_pct,violation_frac,
//! mean_norm_service,utilization,region_counts`
//!
//! Savings that are undefined (zero baseline) are written as `undefined`.
//! `region_counts` is `name=count` pairs joined by `;`.

use std::io::{Read, Write};

use thiserror::Error;

use super::{JobOutcome, RunMetrics, SavingsRow};

pub const OUTCOME_COLUMNS: [&str; 14] = [
    "policy",
    "tolerance",
    "capacity_scale",
    "job_id",
    "region",
    "received_at",
    "start_exec",
    "finish",
    "service_time",
    "exec_time",
    "transfer",
    "carbon_g",
    "water_l",
    "violated",
];

pub const METRICS_COLUMNS: [&str; 12] = [
    "policy",
    "tolerance",
    "capacity_scale",
    "jobs",
    "total_carbon_g",
    "total_water_l",
    "carbon_savings_pct",
    "water_savings_pct",
    "violation_frac",
    "mean_norm_service",
    "utilization",
    "region_counts",
];

const UNDEFINED: &str = "undefined";

#[derive(Debug, Error)]
pub enum OutputError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {msg}")]
    Malformed { line: u64, msg: String },
}

/// Identifies one cell of a run or sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLabel {
    pub policy: String,
    pub tolerance: f64,
    pub capacity_scale: f64,
}

/// One row of `metrics.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub label: RunLabel,
    pub jobs: usize,
    pub total_carbon_g: f64,
    pub total_water_l: f64,
    pub carbon_savings_pct: Option<f64>,
    pub water_savings_pct: Option<f64>,
    pub violation_frac: f64,
    pub mean_norm_service: f64,
    pub utilization: f64,
    pub region_counts: String,
}

impl MetricsRecord {
    pub fn new(
        label: RunLabel,
        m: &RunMetrics,
        savings: Option<&SavingsRow>,
        regions: &[String],
    ) -> Self {
        let region_counts = regions
            .iter()
            .zip(&m.region_counts)
            .map(|(r, c)| format!("{r}={c}"))
            .collect::<Vec<_>>()
            .join(";");
        Self {
            label,
            jobs: m.jobs,
            total_carbon_g: m.total_carbon,
            total_water_l: m.total_water,
            carbon_savings_pct: savings.and_then(|s| s.carbon_savings_pct),
            water_savings_pct: savings.and_then(|s| s.water_savings_pct),
            violation_frac: m.violation_fraction,
            mean_norm_service: m.mean_norm_service,
            utilization: m.utilization,
            region_counts,
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| UNDEFINED.to_string(), |x| x.to_string())
}

pub fn write_outcomes<W: Write>(
    writer: W,
    runs: &[(RunLabel, &[JobOutcome])],
    regions: &[String],
) -> Result<(), OutputError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(OUTCOME_COLUMNS)?;
    for (label, outcomes) in runs {
        for o in *outcomes {
            w.write_record([
                label.policy.clone(),
                label.tolerance.to_string(),
                label.capacity_scale.to_string(),
                o.job_id.clone(),
                regions[o.region].clone(),
                o.received_at.to_string(),
                o.start_exec.to_string(),
                o.finish.to_string(),
                o.service_time.to_string(),
                o.exec_time.to_string(),
                o.transfer.to_string(),
                o.carbon.to_string(),
                o.water.to_string(),
                o.violated.to_string(),
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_metrics<W: Write>(writer: W, rows: &[MetricsRecord]) -> Result<(), OutputError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(METRICS_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.label.policy.clone(),
            r.label.tolerance.to_string(),
            r.label.capacity_scale.to_string(),
            r.jobs.to_string(),
            r.total_carbon_g.to_string(),
            r.total_water_l.to_string(),
            opt(r.carbon_savings_pct),
            opt(r.water_savings_pct),
            r.violation_frac.to_string(),
            r.mean_norm_service.to_string(),
            r.utilization.to_string(),
            r.region_counts.clone(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Parses a `metrics.csv` written by [`write_metrics`]. An empty input
/// yields no rows.
pub fn read_metrics<R: Read>(reader: R) -> Result<Vec<MetricsRecord>, OutputError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.is_empty() {
        return Ok(Vec::new());
    }
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| OutputError::Malformed {
                line: 1,
                msg: format!("missing column `{name}`"),
            })
    };
    let idx: Vec<usize> = METRICS_COLUMNS
        .iter()
        .map(|c| col(c))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| rec.get(idx[i]).unwrap_or("");
        let num = |i: usize| -> Result<f64, OutputError> {
            field(i).parse().map_err(|_| OutputError::Malformed {
                line,
                msg: format!("`{}` is not a number: `{}`", METRICS_COLUMNS[i], field(i)),
            })
        };
        let opt_num = |i: usize| -> Result<Option<f64>, OutputError> {
            if field(i) == UNDEFINED {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        out.push(MetricsRecord {
            label: RunLabel {
                policy: field(0).to_string(),
                tolerance: num(1)?,
                capacity_scale: num(2)?,
            },
            jobs: field(3).parse().map_err(|_| OutputError::Malformed {
                line,
                msg: format!("`jobs` is not an integer: `{}`", field(3)),
            })?,
            total_carbon_g: num(4)?,
            total_water_l: num(5)?,
            carbon_savings_pct: opt_num(6)?,
            water_savings_pct: opt_num(7)?,
            violation_frac: num(8)?,
            mean_norm_service: num(9)?,
            utilization: num(10)?,
            region_counts: field(11).to_string(),
        });
    }
    Ok(out)
}
