use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use geosched_core::footprint::ServerSpec;
use geosched_core::sched::SchedulerConfig;
use geosched_core::sim::Policy;
use geosched_core::synth::sample_server;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Input file locations. Relative paths resolve against the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataPaths {
    pub env: PathBuf,
    pub trace: PathBuf,
    pub profiles: PathBuf,
    pub latency: PathBuf,
    /// Per-timestamp generation mix; needed only when `env` has no `ewif` column.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mix: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sources: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterConfig {
    pub slots_per_region: usize,
    /// Per-region overrides of `slots_per_region`.
    pub slots: BTreeMap<String, usize>,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        Self {
            slots_per_region: 35,
            slots: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    /// Half-width of uniform multiplicative noise on job energy.
    pub energy_noise: f64,
    pub seed: u64,
    /// Policy every savings figure is measured against.
    pub baseline: Policy,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            energy_noise: 0.0,
            seed: 0,
            baseline: Policy::Home,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub policies: Vec<Policy>,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            policies: Policy::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub tolerances: Vec<f64>,
    /// Multipliers on every region's slot count.
    pub capacity_scales: Vec<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            tolerances: vec![0.25, 0.5, 0.75, 1.0],
            capacity_scales: vec![1.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    pub data: DataPaths,
    #[serde(default)]
    pub scheduler: SchedulerConfig,
    #[serde(default = "sample_server")]
    pub server: ServerSpec,
    #[serde(default)]
    pub cluster: ClusterConfig,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    /// Reads a TOML config and resolves relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.out_dir);
        fix(&mut self.data.env);
        fix(&mut self.data.trace);
        fix(&mut self.data.profiles);
        fix(&mut self.data.latency);
        if let Some(p) = self.data.mix.as_mut() {
            fix(p);
        }
        if let Some(p) = self.data.sources.as_mut() {
            fix(p);
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.scheduler
            .validate()
            .map_err(|e| CliError::Input(format!("scheduler: {e}")))?;
        if self.sweep.tolerances.is_empty() {
            return Err(CliError::Input("sweep.tolerances must not be empty".into()));
        }
        if let Some(t) = self
            .sweep
            .tolerances
            .iter()
            .find(|t| t.is_nan() || **t < 0.0)
        {
            return Err(CliError::Input(format!("sweep tolerance {t} must be >= 0")));
        }
        if self.sweep.capacity_scales.is_empty() {
            return Err(CliError::Input(
                "sweep.capacity_scales must not be empty".into(),
            ));
        }
        if let Some(s) = self
            .sweep
            .capacity_scales
            .iter()
            .find(|s| s.is_nan() || **s <= 0.0)
        {
            return Err(CliError::Input(format!("capacity scale {s} must be > 0")));
        }
        if self.run.policies.is_empty() {
            return Err(CliError::Input("run.policies must not be empty".into()));
        }
        if !(0.0..1.0).contains(&self.sim.energy_noise) {
            return Err(CliError::Input(format!(
                "sim.energy_noise {} must be in [0, 1)",
                self.sim.energy_noise
            )));
        }
        if self.cluster.slots_per_region == 0 {
            return Err(CliError::Input(
                "cluster.slots_per_region must be > 0".into(),
            ));
        }
        Ok(())
    }

    /// Slot counts for `regions` at `scale`, never below one.
    pub fn slots(&self, regions: &[String], scale: f64) -> Result<Vec<usize>, CliError> {
        if let Some(unknown) = self.cluster.slots.keys().find(|k| !regions.contains(k)) {
            return Err(CliError::Input(format!(
                "cluster.slots names unknown region `{unknown}`"
            )));
        }
        Ok(regions
            .iter()
            .map(|r| {
                let base = self
                    .cluster
                    .slots
                    .get(r)
                    .copied()
                    .unwrap_or(self.cluster.slots_per_region);
                ((base as f64 * scale).round() as usize).max(1)
            })
            .collect())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
