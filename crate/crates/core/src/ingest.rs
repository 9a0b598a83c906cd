//! CSV loaders for environment series, energy mixes, traces, workload
//! profiles and inter-region latency.
//!
//! Every file is comma separated with a header row. Columns are matched by
//! name, so extra columns are ignored and column order is free.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::footprint::{
    mix_ewif, EnergyMix, EnergySourceProfile, FootprintError, JobEnergyRecord, RegionEnvPoint,
};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: u64,
        msg: String,
    },
    #[error("{path}: missing column `{column}`")]
    Schema { path: PathBuf, column: String },
    #[error("{path}:{line}: timestamps for region `{region}` are not strictly increasing")]
    Monotonic {
        path: PathBuf,
        line: u64,
        region: String,
    },
    #[error("{path}:{line}: `{field}` = {value} is out of range ({rule})")]
    Range {
        path: PathBuf,
        line: u64,
        field: String,
        value: f64,
        rule: &'static str,
    },
    #[error("{path}:{line}: duplicate entry {key}")]
    Duplicate {
        path: PathBuf,
        line: u64,
        key: String,
    },
    #[error("{path}: latency matrix is incomplete, missing {from} -> {to} ({present} of {expected} entries)")]
    Incomplete {
        path: PathBuf,
        from: String,
        to: String,
        present: usize,
        expected: usize,
    },
    #[error("{path}: no energy mix for region `{region}` at t={timestamp}")]
    MissingMix {
        path: PathBuf,
        region: String,
        timestamp: i64,
    },
    #[error("{path}: env file has no `ewif` column and no energy mix was supplied")]
    NoEwifSource { path: PathBuf },
    #[error("{path}: no data rows")]
    Empty { path: PathBuf },
    #[error("{path}: region `{region}` at t={timestamp}: {source}")]
    Mix {
        path: PathBuf,
        region: String,
        timestamp: i64,
        #[source]
        source: FootprintError,
    },
}

type Result<T> = std::result::Result<T, IngestError>;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("region `{region}` has no environment data at or before t={time}")]
pub struct SampleError {
    pub region: String,
    pub time: f64,
}

/// Time-ordered environment points of a single region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionEnvSeries {
    pub region: String,
    pub points: Vec<RegionEnvPoint>,
}

impl RegionEnvSeries {
    /// Latest point with `timestamp <= t` (step interpolation).
    pub fn sample(&self, t: f64) -> std::result::Result<&RegionEnvPoint, SampleError> {
        let idx = self.points.partition_point(|p| (p.timestamp as f64) <= t);
        if idx == 0 {
            return Err(SampleError {
                region: self.region.clone(),
                time: t,
            });
        }
        Ok(&self.points[idx - 1])
    }

    pub fn first_timestamp(&self) -> i64 {
        self.points[0].timestamp
    }

    pub fn last_timestamp(&self) -> i64 {
        self.points[self.points.len() - 1].timestamp
    }
}

/// One arrival in a job trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub job_id: String,
    /// Epoch seconds.
    pub arrival: f64,
    pub home_region: String,
    pub benchmark: String,
}

/// Mean energy / execution time per benchmark.
pub type WorkloadProfileDB = BTreeMap<String, JobEnergyRecord>;

/// Square matrix of transfer latencies in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct LatencyMatrix {
    regions: Vec<String>,
    seconds: Vec<f64>,
}

impl LatencyMatrix {
    /// Builds a matrix from a row-major `n x n` table. Validates the same
    /// invariants as [`load_latency`].
    pub fn from_rows(regions: Vec<String>, seconds: Vec<f64>) -> std::result::Result<Self, String> {
        let n = regions.len();
        if seconds.len() != n * n {
            return Err(format!("expected {} entries, got {}", n * n, seconds.len()));
        }
        for i in 0..n {
            for j in 0..n {
                let v = seconds[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(format!("latency {} -> {} is {v}", regions[i], regions[j]));
                }
                if i == j && v != 0.0 {
                    return Err(format!("diagonal latency for {} is {v}", regions[i]));
                }
            }
        }
        Ok(Self { regions, seconds })
    }

    pub fn regions(&self) -> &[String] {
        &self.regions
    }

    pub fn index_of(&self, region: &str) -> Option<usize> {
        self.regions.iter().position(|r| r == region)
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.seconds[from * self.regions.len() + to]
    }

    pub fn between(&self, from: &str, to: &str) -> Option<f64> {
        Some(self.get(self.index_of(from)?, self.index_of(to)?))
    }

    /// The same matrix with rows and columns permuted to follow `order`.
    pub fn reordered(&self, order: &[String]) -> Option<Self> {
        let idx: Option<Vec<usize>> = order.iter().map(|r| self.index_of(r)).collect();
        let idx = idx?;
        if idx.len() != self.regions.len() {
            return None;
        }
        let n = idx.len();
        let mut seconds = Vec::with_capacity(n * n);
        for &i in &idx {
            for &j in &idx {
                seconds.push(self.get(i, j));
            }
        }
        Some(Self {
            regions: order.to_vec(),
            seconds,
        })
    }
}

/// Source table plus per-(region, timestamp) generation mixes.
#[derive(Debug, Clone, Default)]
pub struct MixTable {
    pub sources: Vec<EnergySourceProfile>,
    pub mixes: BTreeMap<(String, i64), EnergyMix>,
    path: PathBuf,
}

impl MixTable {
    pub fn ewif_at(&self, region: &str, timestamp: i64) -> Result<f64> {
        let mix = self
            .mixes
            .get(&(region.to_string(), timestamp))
            .ok_or_else(|| IngestError::MissingMix {
                path: self.path.clone(),
                region: region.to_string(),
                timestamp,
            })?;
        mix_ewif(mix, &self.sources).map_err(|source| IngestError::Mix {
            path: self.path.clone(),
            region: region.to_string(),
            timestamp,
            source,
        })
    }
}

struct Table {
    path: PathBuf,
    header: HashMap<String, usize>,
    rows: Vec<(u64, csv::StringRecord)>,
}

impl Table {
    fn open(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_reader(path, file)
    }

    fn from_reader(path: &Path, reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .has_headers(true)
            .from_reader(reader);
        let header = match rdr.headers() {
            Ok(h) => h
                .iter()
                .enumerate()
                .map(|(i, name)| (name.to_string(), i))
                .collect(),
            Err(e) => return Err(parse_err(path, 1, e.to_string())),
        };
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                parse_err(path, line, e.to_string())
            })?;
            if rec.iter().all(|f| f.is_empty()) {
                continue;
            }
            let line = rec.position().map(|p| p.line()).unwrap_or(0);
            rows.push((line, rec));
        }
        Ok(Self {
            path: path.to_path_buf(),
            header,
            rows,
        })
    }

    fn column(&self, name: &str) -> Result<usize> {
        self.header
            .get(name)
            .copied()
            .ok_or_else(|| IngestError::Schema {
                path: self.path.clone(),
                column: name.to_string(),
            })
    }

    fn str_at<'a>(&self, line: u64, rec: &'a csv::StringRecord, col: usize) -> Result<&'a str> {
        rec.get(col)
            .ok_or_else(|| parse_err(&self.path, line, format!("missing field {}", col + 1)))
    }

    fn f64_at(&self, line: u64, rec: &csv::StringRecord, col: usize, name: &str) -> Result<f64> {
        let raw = self.str_at(line, rec, col)?;
        let v: f64 = raw.parse().map_err(|_| {
            parse_err(
                &self.path,
                line,
                format!("`{name}`: cannot parse `{raw}` as a number"),
            )
        })?;
        if !v.is_finite() {
            return Err(parse_err(
                &self.path,
                line,
                format!("`{name}` is not finite"),
            ));
        }
        Ok(v)
    }

    fn i64_at(&self, line: u64, rec: &csv::StringRecord, col: usize, name: &str) -> Result<i64> {
        let raw = self.str_at(line, rec, col)?;
        raw.parse().map_err(|_| {
            parse_err(
                &self.path,
                line,
                format!("`{name}`: cannot parse `{raw}` as integer seconds"),
            )
        })
    }

    fn range(
        &self,
        line: u64,
        field: &str,
        value: f64,
        ok: bool,
        rule: &'static str,
    ) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(IngestError::Range {
                path: self.path.clone(),
                line,
                field: field.to_string(),
                value,
                rule,
            })
        }
    }
}

fn parse_err(path: &Path, line: u64, msg: String) -> IngestError {
    IngestError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    }
}

/// Loads `env.csv`: `region,timestamp,carbon_intensity,ewif,wue,wsf,pue`.
///
/// When the file has no `ewif` column, EWIF is computed per point from
/// `mix`, which must then cover every (region, timestamp).
pub fn load_env_series(
    path: &Path,
    mix: Option<&MixTable>,
) -> Result<BTreeMap<String, RegionEnvSeries>> {
    let table = Table::open(path)?;
    parse_env(table, mix)
}

/// [`load_env_series`] over an in-memory reader; `path` is used in errors only.
pub fn read_env_series(
    path: &Path,
    reader: impl Read,
    mix: Option<&MixTable>,
) -> Result<BTreeMap<String, RegionEnvSeries>> {
    parse_env(Table::from_reader(path, reader)?, mix)
}

fn parse_env(table: Table, mix: Option<&MixTable>) -> Result<BTreeMap<String, RegionEnvSeries>> {
    let c_region = table.column("region")?;
    let c_ts = table.column("timestamp")?;
    let c_ci = table.column("carbon_intensity")?;
    let c_wue = table.column("wue")?;
    let c_wsf = table.column("wsf")?;
    let c_pue = table.column("pue")?;
    let c_ewif = match (table.column("ewif"), mix) {
        (Ok(c), _) => Some(c),
        (Err(_), Some(_)) => None,
        (Err(e), None) => {
            return Err(if table.rows.is_empty() {
                e
            } else {
                IngestError::NoEwifSource {
                    path: table.path.clone(),
                }
            })
        }
    };

    let mut out: BTreeMap<String, RegionEnvSeries> = BTreeMap::new();
    for (line, rec) in &table.rows {
        let line = *line;
        let region = table.str_at(line, rec, c_region)?.to_string();
        let timestamp = table.i64_at(line, rec, c_ts, "timestamp")?;
        let carbon_intensity = table.f64_at(line, rec, c_ci, "carbon_intensity")?;
        let ewif = match c_ewif {
            Some(c) => table.f64_at(line, rec, c, "ewif")?,
            None => mix.expect("checked above").ewif_at(&region, timestamp)?,
        };
        let wue = table.f64_at(line, rec, c_wue, "wue")?;
        let wsf = table.f64_at(line, rec, c_wsf, "wsf")?;
        let pue = table.f64_at(line, rec, c_pue, "pue")?;

        table.range(
            line,
            "timestamp",
            timestamp as f64,
            timestamp >= 0,
            "must be >= 0",
        )?;
        table.range(
            line,
            "carbon_intensity",
            carbon_intensity,
            carbon_intensity >= 0.0,
            "must be >= 0",
        )?;
        table.range(line, "ewif", ewif, ewif >= 0.0, "must be >= 0")?;
        table.range(line, "wue", wue, wue >= 0.0, "must be >= 0")?;
        table.range(line, "wsf", wsf, wsf >= 0.0, "must be >= 0")?;
        table.range(line, "pue", pue, pue >= 1.0, "must be >= 1")?;

        let series = out
            .entry(region.clone())
            .or_insert_with(|| RegionEnvSeries {
                region: region.clone(),
                points: Vec::new(),
            });
        if let Some(last) = series.points.last() {
            if timestamp <= last.timestamp {
                return Err(IngestError::Monotonic {
                    path: table.path.clone(),
                    line,
                    region,
                });
            }
        }
        series.points.push(RegionEnvPoint {
            region,
            timestamp,
            carbon_intensity,
            ewif,
            wue,
            wsf,
            pue,
        });
    }
    if out.is_empty() {
        return Err(IngestError::Empty { path: table.path });
    }
    Ok(out)
}

/// Writes series in the `env.csv` format, regions in key order.
pub fn write_env_series<'a>(
    writer: impl Write,
    series: impl IntoIterator<Item = &'a RegionEnvSeries>,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "region",
        "timestamp",
        "carbon_intensity",
        "ewif",
        "wue",
        "wsf",
        "pue",
    ])?;
    for s in series {
        for p in &s.points {
            w.write_record([
                p.region.clone(),
                p.timestamp.to_string(),
                p.carbon_intensity.to_string(),
                p.ewif.to_string(),
                p.wue.to_string(),
                p.wsf.to_string(),
                p.pue.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Loads `mix.csv` (`region,timestamp,source,share`) and `sources.csv`
/// (`source,carbon_intensity,ewif`).
pub fn load_mix(mix_path: &Path, sources_path: &Path) -> Result<MixTable> {
    let st = Table::open(sources_path)?;
    let c_name = st.column("source")?;
    let c_ci = st.column("carbon_intensity")?;
    let c_ewif = st.column("ewif")?;
    let mut sources = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, rec) in &st.rows {
        let name = st.str_at(*line, rec, c_name)?.to_string();
        let ci = st.f64_at(*line, rec, c_ci, "carbon_intensity")?;
        let ewif = st.f64_at(*line, rec, c_ewif, "ewif")?;
        st.range(*line, "carbon_intensity", ci, ci >= 0.0, "must be >= 0")?;
        st.range(*line, "ewif", ewif, ewif >= 0.0, "must be >= 0")?;
        if !seen.insert(name.clone()) {
            return Err(IngestError::Duplicate {
                path: st.path.clone(),
                line: *line,
                key: name,
            });
        }
        sources.push(EnergySourceProfile {
            name,
            carbon_intensity: ci,
            ewif,
        });
    }

    let mt = Table::open(mix_path)?;
    let c_region = mt.column("region")?;
    let c_ts = mt.column("timestamp")?;
    let c_source = mt.column("source")?;
    let c_share = mt.column("share")?;
    let mut mixes: BTreeMap<(String, i64), EnergyMix> = BTreeMap::new();
    for (line, rec) in &mt.rows {
        let region = mt.str_at(*line, rec, c_region)?.to_string();
        let ts = mt.i64_at(*line, rec, c_ts, "timestamp")?;
        let source = mt.str_at(*line, rec, c_source)?.to_string();
        let share = mt.f64_at(*line, rec, c_share, "share")?;
        mt.range(
            *line,
            "share",
            share,
            (0.0..=1.0).contains(&share),
            "must be in [0, 1]",
        )?;
        let mix = mixes.entry((region.clone(), ts)).or_default();
        if mix.shares.insert(source.clone(), share).is_some() {
            return Err(IngestError::Duplicate {
                path: mt.path.clone(),
                line: *line,
                key: format!("{region}@{ts}/{source}"),
            });
        }
    }
    Ok(MixTable {
        sources,
        mixes,
        path: mix_path.to_path_buf(),
    })
}

/// Loads `trace.csv`: `job_id,arrival,home_region,benchmark`, stably sorted
/// by arrival. Region and benchmark names are checked when the simulation
/// is wired up, not here.
pub fn load_trace(path: &Path) -> Result<Vec<TraceEntry>> {
    let table = Table::open(path)?;
    if table.rows.is_empty() && table.header.is_empty() {
        return Ok(Vec::new());
    }
    let c_id = table.column("job_id")?;
    let c_arr = table.column("arrival")?;
    let c_home = table.column("home_region")?;
    let c_bench = table.column("benchmark")?;
    let mut out = Vec::with_capacity(table.rows.len());
    for (line, rec) in &table.rows {
        let arrival = table.f64_at(*line, rec, c_arr, "arrival")?;
        table.range(*line, "arrival", arrival, arrival >= 0.0, "must be >= 0")?;
        out.push(TraceEntry {
            job_id: table.str_at(*line, rec, c_id)?.to_string(),
            arrival,
            home_region: table.str_at(*line, rec, c_home)?.to_string(),
            benchmark: table.str_at(*line, rec, c_bench)?.to_string(),
        });
    }
    out.sort_by(|a, b| a.arrival.total_cmp(&b.arrival));
    Ok(out)
}

/// Loads `profiles.csv`: `benchmark,energy_kwh,exec_seconds`.
pub fn load_profiles(path: &Path) -> Result<WorkloadProfileDB> {
    let table = Table::open(path)?;
    let c_name = table.column("benchmark")?;
    let c_energy = table.column("energy_kwh")?;
    let c_exec = table.column("exec_seconds")?;
    let mut out = BTreeMap::new();
    for (line, rec) in &table.rows {
        let name = table.str_at(*line, rec, c_name)?.to_string();
        let energy = table.f64_at(*line, rec, c_energy, "energy_kwh")?;
        let exec_time = table.f64_at(*line, rec, c_exec, "exec_seconds")?;
        table.range(*line, "energy_kwh", energy, energy >= 0.0, "must be >= 0")?;
        table.range(
            *line,
            "exec_seconds",
            exec_time,
            exec_time > 0.0,
            "must be > 0",
        )?;
        if out
            .insert(name.clone(), JobEnergyRecord { energy, exec_time })
            .is_some()
        {
            return Err(IngestError::Duplicate {
                path: table.path.clone(),
                line: *line,
                key: name,
            });
        }
    }
    Ok(out)
}

/// Loads `latency.csv`: `from_region,to_region,seconds`. The region set is
/// every name mentioned; all ordered pairs must be present.
pub fn load_latency(path: &Path) -> Result<LatencyMatrix> {
    let table = Table::open(path)?;
    let c_from = table.column("from_region")?;
    let c_to = table.column("to_region")?;
    let c_sec = table.column("seconds")?;
    let mut entries: BTreeMap<(String, String), f64> = BTreeMap::new();
    let mut regions = BTreeSet::new();
    for (line, rec) in &table.rows {
        let from = table.str_at(*line, rec, c_from)?.to_string();
        let to = table.str_at(*line, rec, c_to)?.to_string();
        let secs = table.f64_at(*line, rec, c_sec, "seconds")?;
        table.range(*line, "seconds", secs, secs >= 0.0, "must be >= 0")?;
        if from == to {
            table.range(*line, "seconds", secs, secs == 0.0, "diagonal must be 0")?;
        }
        regions.insert(from.clone());
        regions.insert(to.clone());
        if entries.insert((from.clone(), to.clone()), secs).is_some() {
            return Err(IngestError::Duplicate {
                path: table.path.clone(),
                line: *line,
                key: format!("{from} -> {to}"),
            });
        }
    }
    if regions.is_empty() {
        return Err(IngestError::Empty { path: table.path });
    }
    let regions: Vec<String> = regions.into_iter().collect();
    let expected = regions.len() * regions.len();
    let mut seconds = Vec::with_capacity(expected);
    for from in &regions {
        for to in &regions {
            match entries.get(&(from.clone(), to.clone())) {
                Some(&s) => seconds.push(s),
                None => {
                    return Err(IngestError::Incomplete {
                        path: table.path.clone(),
                        from: from.clone(),
                        to: to.clone(),
                        present: entries.len(),
                        expected,
                    })
                }
            }
        }
    }
    Ok(LatencyMatrix { regions, seconds })
}
