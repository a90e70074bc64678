//! Scenario configuration, loaded from TOML.
//!
//! Every section has defaults, so an empty file (plus `schema_version`) is a
//! valid scenario. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::controlplane::{ControlPlaneModel, Variant, Waiting};
use crate::csicodec::{Quantizer, SE_RATIO_500M, SE_RATIO_EDGE};
use crate::error::{Error, Result};
use crate::fading::FadingParams;
use crate::geometry::PathLossConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub fading: FadingParams,
    #[serde(default)]
    pub path_loss: PathLossConfig,
    #[serde(default)]
    pub radio: RadioConfig,
    #[serde(default)]
    pub control_plane: ControlPlaneConfig,
    #[serde(default)]
    pub codec: Quantizer,
    #[serde(default)]
    pub density: DensityConfig,
    #[serde(default)]
    pub distance: DistanceConfig,
    #[serde(default)]
    pub scaling: ScalingConfig,
    #[serde(default)]
    pub comp_gain: CompGainConfig,
    #[serde(default)]
    pub codec_bench: CodecBenchConfig,
    #[serde(default)]
    pub budget: BudgetConfig,
}

fn default_seed() -> u64 {
    20_140_717
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            seed: default_seed(),
            fading: FadingParams::default(),
            path_loss: PathLossConfig::default(),
            radio: RadioConfig::default(),
            control_plane: ControlPlaneConfig::default(),
            codec: Quantizer::default(),
            density: DensityConfig::default(),
            distance: DistanceConfig::default(),
            scaling: ScalingConfig::default(),
            comp_gain: CompGainConfig::default(),
            codec_bench: CodecBenchConfig::default(),
            budget: BudgetConfig::default(),
        }
    }
}

/// Transmit powers and receiver noise for the capacity experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadioConfig {
    pub bandwidth_hz: f64,
    pub macro_tx_power_dbm: f64,
    pub micro_tx_power_dbm: f64,
    pub ue_noise_figure_db: f64,
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            bandwidth_hz: 5e6,
            macro_tx_power_dbm: 62.0,
            micro_tx_power_dbm: 30.0,
            ue_noise_figure_db: 9.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControlPlaneConfig {
    pub tti_ms: f64,
    pub one_way_ip_ms: f64,
    pub processing_ms: f64,
    pub waiting: Waiting,
}

impl Default for ControlPlaneConfig {
    fn default() -> Self {
        let m = ControlPlaneModel::swiftc(Waiting::BestCase);
        Self {
            tti_ms: m.tti_ms,
            one_way_ip_ms: m.one_way_ip_ms,
            processing_ms: m.processing_ms,
            waiting: m.waiting,
        }
    }
}

impl ControlPlaneConfig {
    pub fn model(&self, variant: Variant) -> ControlPlaneModel {
        ControlPlaneModel {
            variant,
            tti_ms: self.tti_ms,
            one_way_ip_ms: self.one_way_ip_ms,
            processing_ms: self.processing_ms,
            waiting: self.waiting,
        }
    }
}

/// Network-wide CoMP over a region covered by cells of shrinking radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DensityConfig {
    pub region_radius_m: f64,
    /// Cell radii; each gives `round((R / r)^2)` cells.
    pub cell_radii_m: Vec<f64>,
    pub latencies_ms: Vec<f64>,
    pub trials: usize,
    pub subchannels: usize,
}

impl Default for DensityConfig {
    fn default() -> Self {
        Self {
            region_radius_m: 1000.0,
            cell_radii_m: vec![600.0, 400.0, 300.0, 250.0, 200.0],
            latencies_ms: vec![1.0, 2.0, 5.0, 10.0, 20.0],
            trials: 100,
            subchannels: 8,
        }
    }
}

/// Three-cell cluster; users walk from their cell toward the cluster center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DistanceConfig {
    /// Distance from each cell to the cluster center.
    pub cell_distance_m: f64,
    /// User position as a fraction of the way from its cell to the center.
    pub fractions: Vec<f64>,
    pub latencies_ms: Vec<f64>,
    pub trials: usize,
    pub subchannels: usize,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        Self {
            cell_distance_m: 200.0,
            fractions: vec![0.05, 0.2, 0.4, 0.6, 0.8, 1.0],
            latencies_ms: vec![1.0, 2.0, 3.0, 5.0, 10.0, 21.0],
            trials: 200,
            subchannels: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScalingConfig {
    pub macro_radius_m: f64,
    /// Small cells per sector (three sectors).
    pub densities: Vec<usize>,
    pub users: usize,
    pub trials: usize,
    pub slots: usize,
    pub subchannels: usize,
    pub threshold_db: f64,
    /// Users at or below this speed keep the configured coherence time.
    pub walking_kmph: f64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            macro_radius_m: 1000.0,
            densities: vec![2, 3, 4, 5, 6, 7],
            users: 100,
            trials: 50,
            slots: 12,
            subchannels: 4,
            threshold_db: 15.0,
            walking_kmph: 5.0,
        }
    }
}

/// Reuses the scaling scenario; only the density axis differs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompGainConfig {
    pub densities: Vec<usize>,
    pub trials: usize,
}

impl Default for CompGainConfig {
    fn default() -> Self {
        Self {
            densities: vec![3, 4, 5, 6, 7],
            trials: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CodecBenchConfig {
    pub subframes: usize,
    /// Resource blocks measured per trial.
    pub measured_rbs: usize,
    /// System bandwidth in RBs for the totals (100 at 20 MHz).
    pub system_rbs: usize,
    pub neighbors: usize,
    pub coordination_fraction: f64,
    pub trials: usize,
    pub swiftc_rates_kbps: Vec<f64>,
    pub se_ratio_core: f64,
    pub se_ratio_edge: f64,
}

impl Default for CodecBenchConfig {
    fn default() -> Self {
        Self {
            subframes: 500,
            measured_rbs: 42,
            system_rbs: 100,
            neighbors: 3,
            coordination_fraction: 0.5,
            trials: 8,
            swiftc_rates_kbps: vec![1000.0, 6000.0],
            se_ratio_core: SE_RATIO_500M,
            se_ratio_edge: SE_RATIO_EDGE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetConfig {
    pub bandwidths_hz: Vec<f64>,
    pub uplink_tx_power_dbm: f64,
    pub downlink_tx_power_dbm: f64,
    pub enb_noise_figure_db: f64,
    pub ue_noise_figure_db: f64,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        Self {
            bandwidths_hz: vec![5e6, 10e6, 20e6],
            uplink_tx_power_dbm: 18.0,
            downlink_tx_power_dbm: 30.0,
            enb_noise_figure_db: 5.0,
            ue_noise_figure_db: 9.0,
        }
    }
}

fn non_empty<T>(name: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        Err(Error::Config(format!("{name} must not be empty")))
    } else {
        Ok(())
    }
}

fn at_least_one(name: &str, n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Config(format!("{name} must be at least 1")))
    } else {
        Ok(())
    }
}

fn latencies(name: &str, v: &[f64]) -> Result<()> {
    non_empty(name, v)?;
    if v.iter().any(|l| !(*l >= 0.0)) || v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(format!("{name} must be non-negative and strictly increasing")));
    }
    Ok(())
}

impl ScenarioConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario config is always serializable")
    }

    /// SHA-256 of the canonical TOML rendering.
    pub fn hash_hex(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml_string().as_bytes()))
    }

    /// Overrides the trial count of every experiment.
    pub fn with_trials(mut self, trials: usize) -> Self {
        self.density.trials = trials;
        self.distance.trials = trials;
        self.scaling.trials = trials;
        self.comp_gain.trials = trials;
        self.codec_bench.trials = trials;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.fading.validate().map_err(|e| Error::Config(format!("fading: {e}")))?;
        self.codec.validate().map_err(|e| Error::Config(format!("codec: {e}")))?;
        self.control_plane
            .model(Variant::Swiftc)
            .validate()
            .map_err(|e| Error::Config(format!("control_plane: {e}")))?;
        if !(self.radio.bandwidth_hz > 0.0) {
            return Err(Error::Config("radio.bandwidth_hz must be positive".into()));
        }
        let d = &self.density;
        non_empty("density.cell_radii_m", &d.cell_radii_m)?;
        if d.cell_radii_m.iter().any(|r| !(*r > 0.0)) || !(d.region_radius_m > 0.0) {
            return Err(Error::Config("density radii must be positive".into()));
        }
        latencies("density.latencies_ms", &d.latencies_ms)?;
        at_least_one("density.trials", d.trials)?;
        at_least_one("density.subchannels", d.subchannels)?;
        let x = &self.distance;
        non_empty("distance.fractions", &x.fractions)?;
        if x.fractions.iter().any(|f| !(*f > 0.0 && *f <= 1.0)) {
            return Err(Error::Config("distance.fractions must lie in (0, 1]".into()));
        }
        latencies("distance.latencies_ms", &x.latencies_ms)?;
        at_least_one("distance.trials", x.trials)?;
        at_least_one("distance.subchannels", x.subchannels)?;
        let s = &self.scaling;
        non_empty("scaling.densities", &s.densities)?;
        at_least_one("scaling.users", s.users)?;
        at_least_one("scaling.trials", s.trials)?;
        at_least_one("scaling.slots", s.slots)?;
        at_least_one("scaling.subchannels", s.subchannels)?;
        if !(s.threshold_db > 0.0) {
            return Err(Error::Config("scaling.threshold_db must be positive".into()));
        }
        non_empty("comp_gain.densities", &self.comp_gain.densities)?;
        at_least_one("comp_gain.trials", self.comp_gain.trials)?;
        let c = &self.codec_bench;
        at_least_one("codec_bench.subframes", c.subframes)?;
        at_least_one("codec_bench.measured_rbs", c.measured_rbs)?;
        at_least_one("codec_bench.trials", c.trials)?;
        if !(0.0..=1.0).contains(&c.coordination_fraction) {
            return Err(Error::Config("codec_bench.coordination_fraction must lie in [0, 1]".into()));
        }
        non_empty("budget.bandwidths_hz", &self.budget.bandwidths_hz)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_uses_defaults() {
        let c = ScenarioConfig::from_toml_str("schema_version = 1\n").unwrap();
        assert_eq!(c, ScenarioConfig::default());
    }

    #[test]
    fn round_trips_through_toml() {
        let c = ScenarioConfig::default();
        assert_eq!(ScenarioConfig::from_toml_str(&c.to_toml_string()).unwrap(), c);
    }

    #[test]
    fn unknown_keys_and_versions_are_rejected() {
        assert!(ScenarioConfig::from_toml_str("schema_version = 1\nbogus = 3\n").is_err());
        assert!(ScenarioConfig::from_toml_str("schema_version = 1\n[density]\nradius = 3\n").is_err());
        assert!(ScenarioConfig::from_toml_str("schema_version = 2\n").is_err());
        assert!(ScenarioConfig::from_toml_str("seed = 1\n").is_err());
    }

    #[test]
    fn invalid_values_are_rejected() {
        assert!(ScenarioConfig::from_toml_str("schema_version = 1\n[density]\nlatencies_ms = []\n").is_err());
        assert!(ScenarioConfig::from_toml_str("schema_version = 1\n[scaling]\ntrials = 0\n").is_err());
        assert!(ScenarioConfig::from_toml_str("schema_version = 1\n[fading]\nrho = 1.5\ncoherence_time_ms = 5.0\nsigma_h_sq = 1.0\nfreq_corr = 0.9\n").is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = ScenarioConfig::default();
        let b = ScenarioConfig { seed: 1, ..a.clone() };
        assert_eq!(a.hash_hex(), ScenarioConfig::default().hash_hex());
        assert_ne!(a.hash_hex(), b.hash_hex());
        assert_eq!(a.hash_hex().len(), 64);
    }
}
