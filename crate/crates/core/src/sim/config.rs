//! Experiment configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cost::{Scenario, ScenarioParams};
use crate::error::{parse_error_with_source, Error, Result};
use crate::profile::NetCostModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Per-mobile allocation for one fixed channel draw.
    Fig4a,
    /// Sum quality against the number of mobiles over random draws.
    Fig4b,
    /// One instance, every method, per-mobile rows.
    Single,
    /// The joint solver against the brute-force grid on small instances.
    Oracle,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Fig4a => "fig4a",
            Mode::Fig4b => "fig4b",
            Mode::Single => "single",
            Mode::Oracle => "oracle",
        }
    }
}

/// Uplink gains of the reference five-mobile draw.
pub const REFERENCE_GAINS_UP: [f64; 5] = [0.05, 1.32, 1.95, 4.63, 3.43];
/// Downlink gains of the reference five-mobile draw.
pub const REFERENCE_GAINS_DOWN: [f64; 5] = [5.17, 1.66, 1.51, 0.62, 1.14];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub seed: u64,
    pub trials: usize,
    /// Number of mobiles for `fig4a`, `single` and `oracle`.
    pub mobiles: usize,
    /// Inclusive range of mobile counts swept by `fig4b`.
    pub mobiles_range: [usize; 2],
    pub gamma_shape: f64,
    pub gamma_scale: f64,
    /// Grid points per axis of the brute-force oracle.
    pub oracle_resolution: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gains_up: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gains_down: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_caps: Option<Vec<f64>>,
    /// Fitted model file; its contents replace `scenario.net` on load.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub net_model_file: Option<PathBuf>,
    pub scenario: ScenarioParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            mode: Mode::Single,
            seed: 0,
            trials: 1,
            mobiles: 5,
            mobiles_range: [2, 10],
            gamma_shape: 3.0,
            gamma_scale: 1.0 / 3.0,
            oracle_resolution: 20,
            output: None,
            gains_up: None,
            gains_down: None,
            local_caps: None,
            net_model_file: None,
            scenario: ScenarioParams::default(),
        }
    }
}

impl ExperimentConfig {
    /// Parses a config and resolves it; relative model paths are taken
    /// relative to `base_dir`.
    pub fn from_toml_str(src: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut config: ExperimentConfig = toml::from_str(src).map_err(|e| parse_error_with_source(e, src))?;
        if let Some(file) = config.net_model_file.take() {
            let path = match base_dir {
                Some(dir) if file.is_relative() => dir.join(&file),
                _ => file,
            };
            config.scenario.net = NetCostModel::load(&path)?;
        }
        config.validate()?;
        Ok(config)
    }

    /// The resolved config, with every default spelled out.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::validation("trials must be at least 1"));
        }
        if self.mobiles < 1 {
            return Err(Error::validation("mobiles must be at least 1"));
        }
        let [lo, hi] = self.mobiles_range;
        if lo < 1 || lo > hi {
            return Err(Error::validation("mobiles_range must be a non-empty range of positive counts"));
        }
        if !(self.gamma_shape > 0.0 && self.gamma_shape.is_finite()) {
            return Err(Error::validation("gamma_shape must be positive"));
        }
        if !(self.gamma_scale > 0.0 && self.gamma_scale.is_finite()) {
            return Err(Error::validation("gamma_scale must be positive"));
        }
        if self.oracle_resolution < 2 {
            return Err(Error::validation("oracle_resolution must be at least 2"));
        }
        for (name, v) in [
            ("gains_up", &self.gains_up),
            ("gains_down", &self.gains_down),
            ("local_caps", &self.local_caps),
        ] {
            if let Some(v) = v {
                if v.len() != self.mobiles {
                    return Err(Error::validation(format!(
                        "{name} has {} entries but mobiles = {}",
                        v.len(),
                        self.mobiles
                    )));
                }
            }
        }
        if self.gains_up.is_some() != self.gains_down.is_some() {
            return Err(Error::validation("gains_up and gains_down must be given together"));
        }
        self.scenario.net.validate()?;
        let unit = vec![1.0; self.mobiles];
        self.scenario.build(&unit, &unit, self.local_caps.as_deref())?;
        Ok(())
    }

    /// Gains fixed by the config, if any.
    pub fn fixed_gains(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((self.gains_up.clone()?, self.gains_down.clone()?))
    }

    pub fn scenario(&self, gains_up: &[f64], gains_down: &[f64]) -> Result<Scenario> {
        let caps = self.local_caps.as_deref().filter(|c| c.len() == gains_up.len());
        self.scenario.build(gains_up, gains_down, caps)
    }
}

/// Reads and resolves a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_toml_str(&src, path.parent())
}
