//! Carbon and water footprint models for a single job execution.
//!
//! Units are fixed throughout: grams of CO₂, kWh, liters and seconds.
//! Every function here is pure; callers sample the region environment at
//! the job's start time and pass the point in.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on the sum of energy-mix shares.
pub const SHARE_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FootprintError {
    #[error("manufacturing carbon intensity is zero; manufacturing energy is undefined")]
    ZeroManufacturingIntensity,
    #[error("energy source `{0}` is not in the source table")]
    UnknownSource(String),
    #[error("energy mix share for `{source_name}` is {share}, outside [0, 1]")]
    ShareOutOfRange { source_name: String, share: f64 },
    #[error("energy mix shares sum to {0}, expected 1")]
    ShareSum(f64),
}

/// Per-source carbon intensity (gCO₂/kWh) and water intensity factor (L/kWh).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySourceProfile {
    pub name: String,
    pub carbon_intensity: f64,
    pub ewif: f64,
}

/// Fractional generation shares keyed by source name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyMix {
    pub shares: BTreeMap<String, f64>,
}

impl EnergyMix {
    pub fn new(shares: impl IntoIterator<Item = (String, f64)>) -> Self {
        Self {
            shares: shares.into_iter().collect(),
        }
    }

    pub fn validate(&self) -> Result<(), FootprintError> {
        for (name, &share) in &self.shares {
            if !(0.0..=1.0).contains(&share) {
                return Err(FootprintError::ShareOutOfRange {
                    source_name: name.clone(),
                    share,
                });
            }
        }
        let sum: f64 = self.shares.values().sum();
        if (sum - 1.0).abs() > SHARE_SUM_TOLERANCE {
            return Err(FootprintError::ShareSum(sum));
        }
        Ok(())
    }
}

/// Environmental conditions of one region at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionEnvPoint {
    pub region: String,
    /// Epoch seconds.
    pub timestamp: i64,
    /// gCO₂/kWh
    pub carbon_intensity: f64,
    /// L/kWh of generated electricity.
    pub ewif: f64,
    /// L/kWh of IT energy, onsite cooling.
    pub wue: f64,
    /// Water scarcity factor of the data-center region.
    pub wsf: f64,
    pub pue: f64,
}

/// Embodied footprint parameters of the (homogeneous) server fleet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServerSpec {
    /// Total embodied carbon of one server, gCO₂.
    pub embodied_carbon_total: f64,
    /// Server lifetime, seconds.
    pub lifetime: f64,
    /// Carbon intensity at the manufacturing site, gCO₂/kWh.
    pub mfg_carbon_intensity: f64,
    /// EWIF at the manufacturing site, L/kWh.
    pub mfg_ewif: f64,
    /// Water scarcity factor at the manufacturing site.
    pub wsf_server: f64,
}

impl ServerSpec {
    /// Fraction of the server's lifetime consumed by `exec_time` seconds.
    pub fn lifetime_share(&self, exec_time: f64) -> f64 {
        exec_time / self.lifetime
    }
}

/// Profiled energy and execution time of one job.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JobEnergyRecord {
    /// kWh
    pub energy: f64,
    /// seconds
    pub exec_time: f64,
}

/// Operational plus amortized embodied carbon, gCO₂.
pub fn total_carbon(rec: &JobEnergyRecord, carbon_intensity: f64, server: &ServerSpec) -> f64 {
    rec.energy * carbon_intensity
        + server.lifetime_share(rec.exec_time) * server.embodied_carbon_total
}

/// Water consumed generating the electricity, scaled by regional scarcity.
pub fn offsite_water(rec: &JobEnergyRecord, env: &RegionEnvPoint) -> f64 {
    env.pue * rec.energy * env.ewif * (1.0 + env.wsf)
}

/// Cooling water evaporated at the data center, scaled by regional scarcity.
pub fn onsite_water(rec: &JobEnergyRecord, env: &RegionEnvPoint) -> f64 {
    rec.energy * env.wue * (1.0 + env.wsf)
}

/// Total water consumed manufacturing one server, liters.
///
/// Manufacturing energy is recovered from the embodied carbon as
/// `embodied_carbon_total / mfg_carbon_intensity` (kWh).
pub fn embodied_water_total(server: &ServerSpec) -> Result<f64, FootprintError> {
    if server.mfg_carbon_intensity == 0.0 {
        return Err(FootprintError::ZeroManufacturingIntensity);
    }
    let mfg_energy = server.embodied_carbon_total / server.mfg_carbon_intensity;
    Ok(mfg_energy * server.mfg_ewif * (1.0 + server.wsf_server))
}

/// Offsite + onsite + amortized embodied water, liters.
pub fn total_water(
    rec: &JobEnergyRecord,
    env: &RegionEnvPoint,
    server: &ServerSpec,
) -> Result<f64, FootprintError> {
    let embodied = embodied_water_total(server)?;
    Ok(total_water_with_embodied(rec, env, server, embodied))
}

/// [`total_water`] with the server's embodied water precomputed.
pub fn total_water_with_embodied(
    rec: &JobEnergyRecord,
    env: &RegionEnvPoint,
    server: &ServerSpec,
    embodied_water: f64,
) -> f64 {
    offsite_water(rec, env)
        + onsite_water(rec, env)
        + server.lifetime_share(rec.exec_time) * embodied_water
}

/// Liters of water per kWh of IT energy at this region and instant.
pub fn water_intensity(env: &RegionEnvPoint) -> f64 {
    (env.wue + env.pue * env.ewif) * (1.0 + env.wsf)
}

/// Share-weighted EWIF of a generation mix.
pub fn mix_ewif<'a>(
    mix: &EnergyMix,
    table: impl IntoIterator<Item = &'a EnergySourceProfile>,
) -> Result<f64, FootprintError> {
    mix.validate()?;
    let table: BTreeMap<&str, &EnergySourceProfile> =
        table.into_iter().map(|s| (s.name.as_str(), s)).collect();
    mix.shares.iter().try_fold(0.0, |acc, (name, share)| {
        let source = table
            .get(name.as_str())
            .ok_or_else(|| FootprintError::UnknownSource(name.clone()))?;
        Ok(acc + share * source.ewif)
    })
}
