//! Seeded generator for the bundled sample dataset.
//!
//! Each region's hourly generation mix is built from a fixed base share
//! of firm sources, a diurnal solar term, an autocorrelated wind term and a
//! dispatchable fossil source filling the remainder. Carbon intensity and
//! EWIF follow from the mix, so hydro-heavy grids come out low-carbon but
//! water-thirsty and coal-heavy grids the reverse. WUE rises in the local
//! afternoon, when solar pushes carbon intensity down.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs::File;
use std::io;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::footprint::{EnergySourceProfile, JobEnergyRecord, RegionEnvPoint, ServerSpec};
use crate::ingest::{
    write_env_series, LatencyMatrix, RegionEnvSeries, TraceEntry, WorkloadProfileDB,
};

const HOUR: i64 = 3600;
const PUE: f64 = 1.2;

/// Generation sources with (gCO₂/kWh, L/kWh).
pub fn energy_sources() -> Vec<EnergySourceProfile> {
    [
        ("coal", 1050.0, 1.6),
        ("gas", 450.0, 0.75),
        ("hydro", 17.0, 17.0),
        ("nuclear", 12.0, 2.3),
        ("solar", 41.0, 0.3),
        ("wind", 11.0, 0.0),
    ]
    .into_iter()
    .map(|(name, ci, ewif)| EnergySourceProfile {
        name: name.to_string(),
        carbon_intensity: ci,
        ewif,
    })
    .collect()
}

struct RegionParams {
    name: &'static str,
    utc_offset_hours: f64,
    /// Firm shares, constant over time.
    firm: &'static [(&'static str, f64)],
    solar_peak: f64,
    wind_mean: f64,
    wind_sd: f64,
    /// Fills whatever the other sources leave.
    dispatchable: &'static str,
    wue_base: f64,
    wue_amp: f64,
    wsf: f64,
    home_weight: f64,
}

const REGIONS: [RegionParams; 5] = [
    RegionParams {
        name: "madrid",
        utc_offset_hours: 1.0,
        firm: &[("nuclear", 0.20), ("hydro", 0.08)],
        solar_peak: 0.35,
        wind_mean: 0.22,
        wind_sd: 0.08,
        dispatchable: "gas",
        wue_base: 1.1,
        wue_amp: 0.5,
        wsf: 1.6,
        home_weight: 0.2,
    },
    RegionParams {
        name: "mumbai",
        utc_offset_hours: 5.5,
        firm: &[("hydro", 0.08), ("nuclear", 0.03)],
        solar_peak: 0.15,
        wind_mean: 0.05,
        wind_sd: 0.03,
        dispatchable: "coal",
        wue_base: 1.6,
        wue_amp: 0.4,
        wsf: 1.3,
        home_weight: 0.25,
    },
    RegionParams {
        name: "oregon",
        utc_offset_hours: -8.0,
        firm: &[("hydro", 0.45), ("nuclear", 0.03)],
        solar_peak: 0.08,
        wind_mean: 0.12,
        wind_sd: 0.06,
        dispatchable: "gas",
        wue_base: 0.5,
        wue_amp: 0.25,
        wsf: 0.9,
        home_weight: 0.2,
    },
    RegionParams {
        name: "paris",
        utc_offset_hours: 1.0,
        firm: &[("nuclear", 0.74), ("hydro", 0.08)],
        solar_peak: 0.10,
        wind_mean: 0.10,
        wind_sd: 0.05,
        dispatchable: "gas",
        wue_base: 0.45,
        wue_amp: 0.2,
        wsf: 0.25,
        home_weight: 0.15,
    },
    RegionParams {
        name: "zurich",
        utc_offset_hours: 1.0,
        firm: &[("hydro", 0.60), ("nuclear", 0.30)],
        solar_peak: 0.08,
        wind_mean: 0.02,
        wind_sd: 0.01,
        dispatchable: "gas",
        wue_base: 0.3,
        wue_amp: 0.15,
        wsf: 0.15,
        home_weight: 0.2,
    },
];

/// (name, average power in W, execution time in s)
const BENCHMARKS: [(&str, f64, f64); 10] = [
    ("blackscholes", 310.0, 2.0 * 3600.0),
    ("canneal", 280.0, 3.5 * 3600.0),
    ("data-caching", 350.0, 4.0 * 3600.0),
    ("dedup", 330.0, 1.5 * 3600.0),
    ("graph-analytics", 420.0, 5.0 * 3600.0),
    ("media-streaming", 290.0, 3.0 * 3600.0),
    ("memory-analytics", 400.0, 4.5 * 3600.0),
    ("netdedup", 250.0, 2.5 * 3600.0),
    ("swaptions", 450.0, 2.0 * 3600.0),
    ("web-serving", 370.0, 3.0 * 3600.0),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SampleOptions {
    pub seed: u64,
    /// Length of the arrival window.
    pub days: u32,
    /// Expected number of arrivals.
    pub jobs: usize,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self {
            seed: 7,
            days: 10,
            jobs: 2000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub env: Vec<RegionEnvSeries>,
    pub trace: Vec<TraceEntry>,
    pub profiles: WorkloadProfileDB,
    pub latency: LatencyMatrix,
}

/// Server fleet used with the sample: about 1.2 t embodied CO₂ over four
/// years, manufactured on a coal-heavy grid.
pub fn sample_server() -> ServerSpec {
    ServerSpec {
        embodied_carbon_total: 1.2e6,
        lifetime: 4.0 * 365.0 * 86400.0,
        mfg_carbon_intensity: 600.0,
        mfg_ewif: 2.0,
        wsf_server: 0.5,
    }
}

pub fn generate(opts: &SampleOptions) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let sources: BTreeMap<String, EnergySourceProfile> = energy_sources()
        .into_iter()
        .map(|s| (s.name.clone(), s))
        .collect();
    // one spare day so jobs placed late still see data
    let hours = i64::from(opts.days + 1) * 24;

    let env = REGIONS
        .iter()
        .map(|p| region_series(p, hours, &sources, &mut rng))
        .collect();

    let profiles = BENCHMARKS
        .iter()
        .map(|&(name, watts, exec)| {
            let energy = watts * exec / 3600.0 / 1000.0;
            (
                name.to_string(),
                JobEnergyRecord {
                    energy,
                    exec_time: exec,
                },
            )
        })
        .collect();

    let window = f64::from(opts.days) * 86400.0;
    let rate = opts.jobs as f64 / window;
    let total_weight: f64 = REGIONS.iter().map(|r| r.home_weight).sum();
    let mut trace = Vec::new();
    let mut t = 0.0;
    loop {
        t += -(1.0 - rng.gen::<f64>()).ln() / rate;
        if t >= window {
            break;
        }
        let mut pick = rng.gen::<f64>() * total_weight;
        let home = REGIONS
            .iter()
            .find(|r| {
                pick -= r.home_weight;
                pick < 0.0
            })
            .unwrap_or(&REGIONS[REGIONS.len() - 1]);
        let bench = BENCHMARKS[rng.gen_range(0..BENCHMARKS.len())].0;
        trace.push(TraceEntry {
            job_id: format!("job-{:05}", trace.len()),
            arrival: t.round(),
            home_region: home.name.to_string(),
            benchmark: bench.to_string(),
        });
    }

    Sample {
        env,
        trace,
        profiles,
        latency: sample_latency(),
    }
}

fn region_series(
    p: &RegionParams,
    hours: i64,
    sources: &BTreeMap<String, EnergySourceProfile>,
    rng: &mut ChaCha8Rng,
) -> RegionEnvSeries {
    let firm_total: f64 = p.firm.iter().map(|&(_, s)| s).sum();
    let mut wind = p.wind_mean;
    let points = (0..hours)
        .map(|h| {
            let local = (h as f64 + p.utc_offset_hours).rem_euclid(24.0);
            let daylight = (PI * (local - 6.0) / 12.0).sin().max(0.0);
            let solar = p.solar_peak * daylight * rng.gen_range(0.8..1.0);
            wind =
                (p.wind_mean + 0.85 * (wind - p.wind_mean) + p.wind_sd * rng.gen_range(-1.0..1.0))
                    .clamp(0.0, 2.0 * p.wind_mean);
            let rest = (1.0 - firm_total - solar - wind).max(0.0);
            let norm = firm_total + solar + wind + rest;

            let mut mix: BTreeMap<&str, f64> = BTreeMap::new();
            for &(name, share) in p.firm {
                *mix.entry(name).or_default() += share / norm;
            }
            *mix.entry("solar").or_default() += solar / norm;
            *mix.entry("wind").or_default() += wind / norm;
            *mix.entry(p.dispatchable).or_default() += rest / norm;
            let (ci, ewif) = mix.iter().fold((0.0, 0.0), |(ci, ewif), (name, share)| {
                let s = &sources[*name];
                (ci + share * s.carbon_intensity, ewif + share * s.ewif)
            });

            // afternoon heat peak, roughly three hours after solar noon
            let heat = (2.0 * PI * (local - 9.0) / 24.0).sin();
            let wue = (p.wue_base + p.wue_amp * heat + 0.05 * rng.gen_range(-1.0..1.0)).max(0.05);

            RegionEnvPoint {
                region: p.name.to_string(),
                timestamp: h * HOUR,
                carbon_intensity: round3(ci),
                ewif: round3(ewif),
                wue: round3(wue),
                wsf: p.wsf,
                pue: PUE,
            }
        })
        .collect();
    RegionEnvSeries {
        region: p.name.to_string(),
        points,
    }
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

/// Symmetric transfer latencies in seconds.
fn sample_latency() -> LatencyMatrix {
    let names: Vec<String> = REGIONS.iter().map(|r| r.name.to_string()).collect();
    let pair = |a: &str, b: &str| -> f64 {
        let key = if a < b { (a, b) } else { (b, a) };
        match key {
            ("madrid", "mumbai") => 75.0,
            ("madrid", "oregon") => 85.0,
            ("madrid", "paris") => 20.0,
            ("madrid", "zurich") => 25.0,
            ("mumbai", "oregon") => 90.0,
            ("mumbai", "paris") => 70.0,
            ("mumbai", "zurich") => 65.0,
            ("oregon", "paris") => 80.0,
            ("oregon", "zurich") => 85.0,
            ("paris", "zurich") => 20.0,
            _ => 0.0,
        }
    };
    let seconds = names
        .iter()
        .flat_map(|a| {
            names
                .iter()
                .map(move |b| if a == b { 0.0 } else { pair(a, b) })
        })
        .collect();
    LatencyMatrix::from_rows(names, seconds).expect("static latency table is valid")
}

/// Writes `env.csv`, `trace.csv`, `profiles.csv` and `latency.csv` into `dir`.
pub fn write_sample(dir: &Path, sample: &Sample) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    write_env_series(File::create(dir.join("env.csv"))?, &sample.env)?;

    let mut w = csv::Writer::from_writer(File::create(dir.join("trace.csv"))?);
    w.write_record(["job_id", "arrival", "home_region", "benchmark"])?;
    for e in &sample.trace {
        w.write_record([
            e.job_id.as_str(),
            &e.arrival.to_string(),
            &e.home_region,
            &e.benchmark,
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_writer(File::create(dir.join("profiles.csv"))?);
    w.write_record(["benchmark", "energy_kwh", "exec_seconds"])?;
    for (name, r) in &sample.profiles {
        w.write_record([
            name.as_str(),
            &r.energy.to_string(),
            &r.exec_time.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_writer(File::create(dir.join("latency.csv"))?);
    w.write_record(["from_region", "to_region", "seconds"])?;
    let regions = sample.latency.regions();
    for (i, a) in regions.iter().enumerate() {
        for (j, b) in regions.iter().enumerate() {
            w.write_record([a.as_str(), b, &sample.latency.get(i, j).to_string()])?;
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::footprint::water_intensity;

    fn mean(xs: impl Iterator<Item = f64>) -> f64 {
        let v: Vec<f64> = xs.collect();
        v.iter().sum::<f64>() / v.len() as f64
    }

    #[test]
    fn deterministic_and_sized() {
        let a = generate(&SampleOptions::default());
        let b = generate(&SampleOptions::default());
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.env[0].points, b.env[0].points);
        assert!((1800..2200).contains(&a.trace.len()));
        assert_eq!(a.env.len(), 5);
        assert!(a.trace.windows(2).all(|w| w[0].arrival <= w[1].arrival));
    }

    fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
        let (mx, my) = (mean(xs.iter().copied()), mean(ys.iter().copied()));
        let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        cov / (vx * vy).sqrt()
    }

    #[test]
    fn carbon_and_water_pull_apart() {
        let s = generate(&SampleOptions::default());
        let ci: Vec<f64> = s
            .env
            .iter()
            .map(|r| mean(r.points.iter().map(|p| p.carbon_intensity)))
            .collect();
        let ewif: Vec<f64> = s
            .env
            .iter()
            .map(|r| mean(r.points.iter().map(|p| p.ewif)))
            .collect();
        // across regions, cleaner grids use thirstier generation
        assert!(correlation(&ci, &ewif) < 0.0);
        let zurich = s.env.iter().position(|r| r.region == "zurich").unwrap();
        let wi: Vec<f64> = s
            .env
            .iter()
            .map(|r| mean(r.points.iter().map(water_intensity)))
            .collect();
        assert!(wi.iter().filter(|&&w| w > wi[zurich]).count() <= 1);
        assert!(ci.iter().filter(|&&c| c < ci[zurich]).count() <= 1);
        // within a day, solar hours are clean but hot
        for r in &s.env {
            let c: Vec<f64> = r.points.iter().map(|p| p.carbon_intensity).collect();
            let w: Vec<f64> = r.points.iter().map(|p| p.wue).collect();
            assert!(correlation(&c, &w) < 0.0, "{}", r.region);
        }
    }
}
