//! Command implementations behind the `geosched` binary.
//!
//! Every command returns [`CliError`], whose [`CliError::exit_code`] is the
//! process contract: 0 success, 1 simulation failure, 2 bad input or config.

pub mod config;
mod plot;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use geosched_core::ingest::{
    load_env_series, load_latency, load_mix, load_profiles, load_trace, IngestError, TraceEntry,
};
use geosched_core::sim::{
    self, compare, write_metrics, write_outcomes, MetricsRecord, OutputError, Policy, RunLabel,
    RunOutput, SimConfig, SimError, World,
};
use rayon::prelude::*;
use thiserror::Error;

pub use config::RunConfig;
pub use plot::{cmd_plotdata, pivot, SeriesPoint};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("simulation failed: {0}")]
    Sim(String),
    #[error("{path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Sim(_) | CliError::Output { .. } => 1,
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::UnknownRegion { .. }
            | SimError::UnknownBenchmark { .. }
            | SimError::RegionMismatch { .. }
            | SimError::SlotCount { .. }
            | SimError::ZeroSlots(_)
            | SimError::Config(_) => CliError::Input(e.to_string()),
            _ => CliError::Sim(e.to_string()),
        }
    }
}

/// Loaded and cross-checked inputs.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub world: World,
    pub trace: Vec<TraceEntry>,
}

pub fn load_inputs(cfg: &RunConfig) -> Result<Inputs, CliError> {
    let mix = match (&cfg.data.mix, &cfg.data.sources) {
        (Some(m), Some(s)) => Some(load_mix(m, s)?),
        (None, None) => None,
        _ => {
            return Err(CliError::Input(
                "data.mix and data.sources must be given together".into(),
            ))
        }
    };
    let env = load_env_series(&cfg.data.env, mix.as_ref())?;
    let trace = load_trace(&cfg.data.trace)?;
    let profiles = load_profiles(&cfg.data.profiles)?;
    let latency = load_latency(&cfg.data.latency)?;
    let world = World::new(env, &latency, profiles, cfg.server.clone())?;
    Ok(Inputs { world, trace })
}

/// One simulated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub policy: Policy,
    pub tolerance: f64,
    pub capacity_scale: f64,
}

impl Cell {
    fn label(&self) -> RunLabel {
        RunLabel {
            policy: self.policy.name().to_string(),
            tolerance: self.tolerance,
            capacity_scale: self.capacity_scale,
        }
    }
}

/// Results of a set of cells in a fixed order.
#[derive(Debug, Clone)]
pub struct Report {
    pub regions: Vec<String>,
    pub records: Vec<MetricsRecord>,
    pub runs: Vec<(RunLabel, RunOutput)>,
}

impl Report {
    pub fn record(
        &self,
        policy: Policy,
        tolerance: f64,
        capacity_scale: f64,
    ) -> Option<&MetricsRecord> {
        self.records.iter().find(|r| {
            r.label.policy == policy.name()
                && r.label.tolerance == tolerance
                && r.label.capacity_scale == capacity_scale
        })
    }

    pub fn run(&self, policy: Policy, tolerance: f64, capacity_scale: f64) -> Option<&RunOutput> {
        self.runs
            .iter()
            .find(|(l, _)| {
                l.policy == policy.name()
                    && l.tolerance == tolerance
                    && l.capacity_scale == capacity_scale
            })
            .map(|(_, o)| o)
    }
}

fn simulate(cfg: &RunConfig, inputs: &Inputs, cell: &Cell) -> Result<RunOutput, CliError> {
    let sim_cfg = SimConfig {
        sched: geosched_core::sched::SchedulerConfig {
            tolerance: cell.tolerance,
            ..cfg.scheduler.clone()
        },
        slots: cfg.slots(&inputs.world.regions, cell.capacity_scale)?,
        energy_noise: cfg.sim.energy_noise,
        seed: cfg.sim.seed,
    };
    Ok(sim::run(
        &inputs.world,
        &inputs.trace,
        &sim_cfg,
        cell.policy,
    )?)
}

/// Simulates `cells` in parallel and compares each against the baseline
/// policy at the same tolerance and capacity scale. Only the requested
/// cells appear in the report, in the order given.
pub fn evaluate(cfg: &RunConfig, inputs: &Inputs, cells: &[Cell]) -> Result<Report, CliError> {
    let mut all = cells.to_vec();
    for c in cells {
        let base = Cell {
            policy: cfg.sim.baseline,
            ..c.clone()
        };
        if !all.contains(&base) {
            all.push(base);
        }
    }
    let outputs: Vec<RunOutput> = all
        .par_iter()
        .map(|c| simulate(cfg, inputs, c))
        .collect::<Result<_, _>>()?;

    let mut records = Vec::with_capacity(cells.len());
    for (cell, out) in cells.iter().zip(&outputs) {
        let base_idx = all
            .iter()
            .position(|c| {
                c.policy == cfg.sim.baseline
                    && c.tolerance == cell.tolerance
                    && c.capacity_scale == cell.capacity_scale
            })
            .expect("baseline cell was added");
        let rows = compare(
            &[outputs[base_idx].metrics.clone(), out.metrics.clone()],
            cfg.sim.baseline.name(),
        )?;
        let savings = rows.last();
        records.push(MetricsRecord::new(
            cell.label(),
            &out.metrics,
            savings,
            &inputs.world.regions,
        ));
    }
    let runs = cells.iter().map(|c| c.label()).zip(outputs).collect();
    Ok(Report {
        regions: inputs.world.regions.clone(),
        records,
        runs,
    })
}

/// Cells of a single comparison at the configured tolerance.
pub fn run_cells(cfg: &RunConfig) -> Vec<Cell> {
    cfg.run
        .policies
        .iter()
        .map(|&policy| Cell {
            policy,
            tolerance: cfg.scheduler.tolerance,
            capacity_scale: 1.0,
        })
        .collect()
}

/// Cartesian sweep ordered by capacity scale, then tolerance, then policy.
pub fn sweep_cells(cfg: &RunConfig) -> Vec<Cell> {
    let mut cells = Vec::new();
    for &capacity_scale in &cfg.sweep.capacity_scales {
        for &tolerance in &cfg.sweep.tolerances {
            for &policy in &cfg.run.policies {
                cells.push(Cell {
                    policy,
                    tolerance,
                    capacity_scale,
                });
            }
        }
    }
    cells
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Output {
            path: path.to_path_buf(),
            source,
        })
}

fn output_error(path: &Path, e: OutputError) -> CliError {
    CliError::Output {
        path: path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    }
}

fn median(xs: &mut [f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// Writes `outcomes.csv`, `metrics.csv`, `overhead.csv` and
/// `effective_config.toml` into `cfg.out_dir`. Only the overhead file
/// depends on wall-clock time.
pub fn write_report(cfg: &RunConfig, report: &Report) -> Result<(), CliError> {
    let dir = &cfg.out_dir;
    std::fs::create_dir_all(dir).map_err(|source| CliError::Output {
        path: dir.clone(),
        source,
    })?;

    let path = dir.join("outcomes.csv");
    let runs: Vec<(RunLabel, &[sim::JobOutcome])> = report
        .runs
        .iter()
        .map(|(l, o)| (l.clone(), o.outcomes.as_slice()))
        .collect();
    write_outcomes(create(&path)?, &runs, &report.regions).map_err(|e| output_error(&path, e))?;

    let path = dir.join("metrics.csv");
    write_metrics(create(&path)?, &report.records).map_err(|e| output_error(&path, e))?;

    let path = dir.join("overhead.csv");
    let io_err = |source| CliError::Output {
        path: path.clone(),
        source,
    };
    let mut w = csv::Writer::from_writer(create(&path)?);
    w.write_record([
        "policy",
        "tolerance",
        "capacity_scale",
        "decisions",
        "median_ms",
        "max_ms",
    ])
    .map_err(|e| io_err(e.into()))?;
    for (label, out) in &report.runs {
        let mut ms: Vec<f64> = out.decision_seconds.iter().map(|s| s * 1e3).collect();
        let max = ms.iter().copied().fold(0.0, f64::max);
        w.write_record([
            label.policy.clone(),
            label.tolerance.to_string(),
            label.capacity_scale.to_string(),
            ms.len().to_string(),
            format!("{:.4}", median(&mut ms)),
            format!("{max:.4}"),
        ])
        .map_err(|e| io_err(e.into()))?;
    }
    w.flush().map_err(io_err)?;

    let path = dir.join("effective_config.toml");
    std::fs::write(&path, cfg.to_toml()).map_err(|source| CliError::Output { path, source })?;
    Ok(())
}

pub fn cmd_run(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let inputs = load_inputs(cfg)?;
    let report = evaluate(cfg, &inputs, &run_cells(cfg))?;
    write_report(cfg, &report)?;
    Ok(report)
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let inputs = load_inputs(cfg)?;
    let report = evaluate(cfg, &inputs, &sweep_cells(cfg))?;
    write_report(cfg, &report)?;
    Ok(report)
}
