use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use super::RunError;
use crate::analysis::Cuts;
use crate::detector::{DetectorScenario, ScenarioSet};
use crate::evtgen::GeneratorConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    DsPi,
    Pi0pi0,
    KstarGamma,
    SinglePi0,
}

impl Channel {
    pub const ALL: [Channel; 4] = [Channel::DsPi, Channel::Pi0pi0, Channel::KstarGamma, Channel::SinglePi0];

    pub fn as_str(self) -> &'static str {
        match self {
            Channel::DsPi => "ds_pi",
            Channel::Pi0pi0 => "pi0pi0",
            Channel::KstarGamma => "kstar_gamma",
            Channel::SinglePi0 => "single_pi0",
        }
    }
}

impl FromStr for Channel {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Channel::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| RunError::Config(format!("channel: unknown channel '{s}' (ds_pi, pi0pi0, kstar_gamma, single_pi0)")))
    }
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Run settings, read from a TOML file and overridable from the command line.
/// Config file paths are relative to the run file; built-in configs are used
/// when a path is absent.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub master_seed: u64,
    /// Events per signal sample, or π⁰ per energy for `single_pi0`.
    pub n_events: u64,
    /// Generic background events; 0 disables the sample.
    pub n_background: u64,
    pub scenario: String,
    pub channel: Channel,
    pub n_z: f64,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub generator_config: Option<PathBuf>,
    #[serde(default)]
    pub scenario_config: Option<PathBuf>,
    #[serde(default)]
    pub cuts_config: Option<PathBuf>,
    /// Background events are read from this file instead of generated.
    #[serde(default)]
    pub event_file: Option<PathBuf>,
    /// π⁰ energies of the `single_pi0` study, GeV.
    #[serde(default = "default_energies")]
    pub pi0_energies: Vec<f64>,
}

fn default_energies() -> Vec<f64> {
    vec![1.0, 2.0, 5.0, 10.0]
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            master_seed: 1,
            n_events: 1000,
            n_background: 1000,
            scenario: "ultra-granular".into(),
            channel: Channel::DsPi,
            n_z: 1e9,
            output_dir: "out".into(),
            generator_config: None,
            scenario_config: None,
            cuts_config: None,
            event_file: None,
            pi0_energies: default_energies(),
        }
    }
}

/// Everything a run needs, loaded and validated.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub run: RunConfig,
    pub generator: GeneratorConfig,
    pub scenario: DetectorScenario,
    pub cuts: Cuts,
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self, RunError> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| RunError::Config(format!("run config: {e}")))?;
        if let Some(base) = base_dir {
            for p in [&mut cfg.generator_config, &mut cfg.scenario_config, &mut cfg.cuts_config, &mut cfg.event_file]
                .into_iter()
                .flatten()
            {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
            if cfg.output_dir.is_relative() {
                cfg.output_dir = base.join(&cfg.output_dir);
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("run config '{}': {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }

    /// Output directory of this run: `<out>/<channel>_<scenario>`.
    pub fn run_dir(&self) -> PathBuf {
        self.output_dir.join(format!("{}_{}", self.channel, self.scenario))
    }

    pub fn resolve(&self) -> Result<Resolved, RunError> {
        if self.n_events < 1 {
            return Err(RunError::Config("n_events must be >= 1".into()));
        }
        if !(self.n_z >= 0.0) {
            return Err(RunError::Config("n_z must be >= 0".into()));
        }
        if self.channel == Channel::SinglePi0 && (self.pi0_energies.is_empty() || self.pi0_energies.iter().any(|&e| !(e > 0.2))) {
            return Err(RunError::Config("pi0_energies must be a non-empty list of energies above 0.2 GeV".into()));
        }
        let generator = match &self.generator_config {
            Some(p) => GeneratorConfig::load(p),
            None => Ok(GeneratorConfig::builtin()),
        }
        .map_err(|e| RunError::Config(e.to_string()))?;
        let scenarios = match &self.scenario_config {
            Some(p) => ScenarioSet::load(p),
            None => Ok(ScenarioSet::builtin()),
        }
        .map_err(|e| RunError::Config(e.to_string()))?;
        let scenario = scenarios.get(&self.scenario).map_err(|e| RunError::Config(e.to_string()))?.clone();
        let cuts = match &self.cuts_config {
            Some(p) => Cuts::load(p),
            None => Ok(Cuts::builtin()),
        }
        .map_err(|e| RunError::Config(e.to_string()))?;
        Ok(Resolved { run: self.clone(), generator, scenario, cuts })
    }
}
