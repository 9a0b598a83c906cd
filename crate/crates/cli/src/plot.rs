//! Pivot of metrics rows into plot-ready series.
//!
//! `series.csv`: `group,x_kind,x,fixed,carbon_savings_pct,water_savings_pct,
//! violation_frac,mean_norm_service,utilization`. `group` is the policy.
//! A `tolerance` series is emitted for every capacity scale (`fixed`), and
//! a `capacity_scale` series for every tolerance when more than one scale
//! is present. Groups keep first-appearance order; points are sorted by
//! `(fixed, x)`.

use std::fs::File;
use std::path::{Path, PathBuf};

use geosched_core::sim::{read_metrics, MetricsRecord};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub group: String,
    pub x_kind: &'static str,
    pub x: f64,
    pub fixed: f64,
    pub carbon_savings_pct: Option<f64>,
    pub water_savings_pct: Option<f64>,
    pub violation_frac: f64,
    pub mean_norm_service: f64,
    pub utilization: f64,
}

pub fn pivot(records: &[MetricsRecord]) -> Vec<SeriesPoint> {
    let mut groups: Vec<&str> = Vec::new();
    for r in records {
        if !groups.contains(&r.label.policy.as_str()) {
            groups.push(&r.label.policy);
        }
    }
    let mut scales: Vec<f64> = records.iter().map(|r| r.label.capacity_scale).collect();
    scales.sort_by(f64::total_cmp);
    scales.dedup();

    let point = |r: &MetricsRecord, x_kind, x, fixed| SeriesPoint {
        group: r.label.policy.clone(),
        x_kind,
        x,
        fixed,
        carbon_savings_pct: r.carbon_savings_pct,
        water_savings_pct: r.water_savings_pct,
        violation_frac: r.violation_frac,
        mean_norm_service: r.mean_norm_service,
        utilization: r.utilization,
    };

    let mut out = Vec::new();
    for g in groups {
        let rows: Vec<&MetricsRecord> = records.iter().filter(|r| r.label.policy == g).collect();
        let mut series: Vec<SeriesPoint> = rows
            .iter()
            .map(|r| point(r, "tolerance", r.label.tolerance, r.label.capacity_scale))
            .collect();
        if scales.len() > 1 {
            series.extend(rows.iter().map(|r| {
                point(
                    r,
                    "capacity_scale",
                    r.label.capacity_scale,
                    r.label.tolerance,
                )
            }));
        }
        series.sort_by(|a, b| {
            (a.x_kind != "tolerance")
                .cmp(&(b.x_kind != "tolerance"))
                .then(a.fixed.total_cmp(&b.fixed))
                .then(a.x.total_cmp(&b.x))
        });
        out.extend(series);
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| x.to_string())
}

/// Reads one or more `metrics.csv` files and writes `series.csv` into
/// `out_dir`. Returns the number of points written.
pub fn cmd_plotdata(metrics: &[PathBuf], out_dir: &Path) -> Result<usize, CliError> {
    let mut records = Vec::new();
    for path in metrics {
        let f =
            File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        records.extend(
            read_metrics(f).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        );
    }
    let points = pivot(&records);

    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Output {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let path = out_dir.join("series.csv");
    let io_err = |e: csv::Error| CliError::Output {
        path: path.clone(),
        source: e.into(),
    };
    let mut w = csv::Writer::from_path(&path).map_err(io_err)?;
    w.write_record([
        "group",
        "x_kind",
        "x",
        "fixed",
        "carbon_savings_pct",
        "water_savings_pct",
        "violation_frac",
        "mean_norm_service",
        "utilization",
    ])
    .map_err(io_err)?;
    for p in &points {
        w.write_record([
            p.group.clone(),
            p.x_kind.to_string(),
            p.x.to_string(),
            p.fixed.to_string(),
            opt(p.carbon_savings_pct),
            opt(p.water_savings_pct),
            p.violation_frac.to_string(),
            p.mean_norm_service.to_string(),
            p.utilization.to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|source| CliError::Output {
        path: path.clone(),
        source,
    })?;
    Ok(points.len())
}
