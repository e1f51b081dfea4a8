use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::EvtGenError;
use crate::constants::{self, particle};
use crate::kinematics::MAX_BODIES;

const DEFAULT_GENERATOR: &str = include_str!("../../configs/generator.toml");
const DEFAULT_DECAYS: &str = include_str!("../../configs/decays.toml");

/// Leading-hadron energy fraction and fragmentation multiplicity model.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fragmentation {
    pub x_mean: f64,
    pub x_width: f64,
    pub x_min: f64,
    pub x_max: f64,
    /// Mean number of fragmentation pions per hemisphere.
    pub mu_frag: f64,
    /// Gaussian width of each transverse momentum component (GeV).
    pub pt_sigma: f64,
    /// Fraction of fragmentation pions that are neutral.
    pub neutral_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BSpecies {
    pub b0: f64,
    pub b_plus: f64,
    pub bs: f64,
    pub baryon: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CSpecies {
    pub d0: f64,
    pub d_plus: f64,
    pub ds: f64,
    pub baryon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayModel {
    #[default]
    PhaseSpace,
}

/// One decay mode of a particle (antiparticle decays are the charge conjugates).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayChannel {
    #[serde(rename = "parent")]
    pub parent_pdg: i32,
    #[serde(rename = "daughters")]
    pub daughter_pdgs: Vec<i32>,
    #[serde(rename = "br")]
    pub branching_fraction: f64,
    #[serde(default)]
    pub model: DecayModel,
}

impl DecayChannel {
    pub fn new(parent: i32, daughters: &[i32], br: f64) -> Self {
        DecayChannel {
            parent_pdg: parent,
            daughter_pdgs: daughters.to_vec(),
            branching_fraction: br,
            model: DecayModel::PhaseSpace,
        }
    }

    /// Checks codes, multiplicity and that the channel is open at the lowest
    /// sampled daughter masses.
    pub fn validate(&self) -> Result<(), EvtGenError> {
        let label = || format!("{} -> {:?}", self.parent_pdg, self.daughter_pdgs);
        let parent = particle(self.parent_pdg)
            .ok_or_else(|| EvtGenError::Config(format!("unknown parent code in {}", label())))?;
        if !parent.unstable {
            return Err(EvtGenError::Config(format!("{} declared for a stable particle", label())));
        }
        if !(0.0..=1.0).contains(&self.branching_fraction) {
            return Err(EvtGenError::Config(format!("branching fraction out of [0,1] in {}", label())));
        }
        let n = self.daughter_pdgs.len();
        if n == 0 || n > MAX_BODIES {
            return Err(EvtGenError::Config(format!("unsupported multiplicity {n} in {}", label())));
        }
        let mut lowest = 0.0;
        for &d in &self.daughter_pdgs {
            let dd = particle(d)
                .ok_or_else(|| EvtGenError::Config(format!("unknown daughter code {d} in {}", label())))?;
            lowest += (dd.mass - 3.0 * dd.width).max(0.0);
        }
        if n == 1 {
            if (lowest - parent.mass).abs() > 1e-6 {
                return Err(EvtGenError::Config(format!("one-body mode must conserve mass: {}", label())));
            }
        } else if lowest >= parent.mass {
            return Err(EvtGenError::Config(format!("closed channel {}", label())));
        }
        let q: i32 = self.daughter_pdgs.iter().map(|&d| constants::charge(d)).sum();
        if q != constants::charge(self.parent_pdg) {
            return Err(EvtGenError::Config(format!("charge not conserved in {}", label())));
        }
        Ok(())
    }
}

/// Decay modes keyed by parent code. Conjugate parents use conjugated daughters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DecayTable {
    channels: BTreeMap<i32, Vec<DecayChannel>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DecayTableFile {
    channel: Vec<DecayChannel>,
}

impl DecayTable {
    pub fn from_channels(list: Vec<DecayChannel>) -> Result<Self, EvtGenError> {
        let mut channels: BTreeMap<i32, Vec<DecayChannel>> = BTreeMap::new();
        for ch in list {
            ch.validate()?;
            if ch.parent_pdg < 0 {
                return Err(EvtGenError::Config(format!(
                    "decay table entries must use the particle code, got {}",
                    ch.parent_pdg
                )));
            }
            channels.entry(ch.parent_pdg).or_default().push(ch);
        }
        for (parent, list) in &channels {
            let total: f64 = list.iter().map(|c| c.branching_fraction).sum();
            if total > 1.0 + 1e-9 {
                return Err(EvtGenError::Config(format!(
                    "branching fractions of {parent} sum to {total} > 1"
                )));
            }
        }
        Ok(DecayTable { channels })
    }

    pub fn parse(text: &str) -> Result<Self, EvtGenError> {
        let file: DecayTableFile =
            toml::from_str(text).map_err(|e| EvtGenError::Config(format!("decay table: {e}")))?;
        Self::from_channels(file.channel)
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_DECAYS).expect("built-in decay table is valid")
    }

    /// Channels of `pdg` (either sign), as written for the particle.
    pub fn channels(&self, pdg: i32) -> &[DecayChannel] {
        self.channels.get(&pdg.abs()).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn total_branching(&self, pdg: i32) -> f64 {
        self.channels(pdg).iter().map(|c| c.branching_fraction).sum()
    }
}

/// Settings of the Z → qq̄ toy generator.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub sqrt_s: f64,
    pub r_b: f64,
    pub r_c: f64,
    pub r_uds: f64,
    /// Light-quark events are produced only when requested.
    pub generate_uds: bool,
    pub fragmentation: Fragmentation,
    pub b_species: BSpecies,
    pub c_species: CSpecies,
    /// Decay table file, relative to the generator config. Built-in table when absent.
    #[serde(default)]
    pub decay_table: Option<String>,
    #[serde(skip)]
    pub decays: DecayTable,
}

impl GeneratorConfig {
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self, EvtGenError> {
        let mut cfg: GeneratorConfig =
            toml::from_str(text).map_err(|e| EvtGenError::Config(format!("generator config: {e}")))?;
        cfg.decays = match &cfg.decay_table {
            Some(rel) => {
                let path = base_dir.map(|d| d.join(rel)).unwrap_or_else(|| rel.into());
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    EvtGenError::Config(format!("decay_table '{}': {e}", path.display()))
                })?;
                DecayTable::parse(&text)?
            }
            None => DecayTable::builtin(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, EvtGenError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| EvtGenError::Config(format!("generator config '{}': {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_GENERATOR, None).expect("built-in generator config is valid")
    }

    pub fn validate(&self) -> Result<(), EvtGenError> {
        let bad = |key: &str, msg: &str| Err(EvtGenError::Config(format!("{key}: {msg}")));
        if !(self.sqrt_s > 0.0) {
            return bad("sqrt_s", "must be positive");
        }
        for (k, v) in [("r_b", self.r_b), ("r_c", self.r_c), ("r_uds", self.r_uds)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(k, "must lie in [0, 1]");
            }
        }
        if (self.r_b + self.r_c + self.r_uds - 1.0).abs() > 1e-9 {
            return bad("r_b + r_c + r_uds", "flavour fractions must sum to 1");
        }
        if !self.generate_uds && self.r_b + self.r_c <= 0.0 {
            return bad("r_b", "no heavy flavour to generate");
        }
        let f = &self.fragmentation;
        if !(0.0 < f.x_min && f.x_min < f.x_max && f.x_max < 1.0) {
            return bad("fragmentation.x_min/x_max", "need 0 < x_min < x_max < 1");
        }
        if !(f.x_width > 0.0) {
            return bad("fragmentation.x_width", "must be positive");
        }
        if !(f.mu_frag >= 0.0) || !(f.pt_sigma >= 0.0) {
            return bad("fragmentation.mu_frag/pt_sigma", "must be non-negative");
        }
        if !(0.0..=1.0).contains(&f.neutral_fraction) {
            return bad("fragmentation.neutral_fraction", "must lie in [0, 1]");
        }
        let b = &self.b_species;
        let bs = [b.b0, b.b_plus, b.bs, b.baryon];
        if bs.iter().any(|&v| v < 0.0) || (bs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return bad("b_species", "fractions must be non-negative and sum to 1");
        }
        let c = &self.c_species;
        let cs = [c.d0, c.d_plus, c.ds, c.baryon];
        if cs.iter().any(|&v| v < 0.0) || (cs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return bad("c_species", "fractions must be non-negative and sum to 1");
        }
        Ok(())
    }

    /// Production fraction of a heavy-hadron species among hadrons of its flavour.
    pub fn species_fraction(&self, pdg: i32) -> f64 {
        match pdg.abs() {
            constants::B0 => self.b_species.b0,
            constants::B_PLUS => self.b_species.b_plus,
            constants::BS => self.b_species.bs,
            constants::LAMBDA_B => self.b_species.baryon,
            constants::D0 => self.c_species.d0,
            constants::D_PLUS => self.c_species.d_plus,
            constants::DS_PLUS => self.c_species.ds,
            constants::LAMBDA_C => self.c_species.baryon,
            _ => 0.0,
        }
    }
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self::builtin()
    }
}
