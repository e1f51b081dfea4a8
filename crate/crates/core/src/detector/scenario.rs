use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::DetectorError;

const DEFAULT_SCENARIOS: &str = include_str!("../../configs/scenarios.toml");

/// Parametric detector response.
///
/// Energy resolution `σ_E/E = a/√E ⊕ b`, photon position resolution on the
/// ECAL face `σ_pos = c/√E ⊕ d` (mm). Every field must be present in a
/// scenario file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorScenario {
    #[serde(skip)]
    pub name: String,
    /// `a`, GeV^½.
    pub ecal_stochastic: f64,
    /// `b`, dimensionless.
    pub ecal_constant: f64,
    /// `c`, mm·GeV^½.
    pub pos_res_stochastic: f64,
    /// `d`, mm.
    pub pos_res_constant: f64,
    /// Radius of the ECAL front face, mm.
    pub ecal_radius: f64,
    /// Lowest reconstructed photon energy, GeV.
    pub photon_threshold: f64,
    /// Mean number of fake photons per hemisphere.
    pub fake_rate: f64,
    /// Mean of the exponential fake-photon energy spectrum above threshold, GeV.
    pub fake_energy_mean: f64,
    /// Photons closer than this on the ECAL face form one cluster, mm.
    pub merge_distance: f64,
    pub pi0_mass_fit_enabled: bool,
    /// Merged π⁰ clusters below this energy are always recognised, GeV.
    pub gamma_pi0_sep_max_energy: f64,
    /// Probability that a genuine photon is identified as a single photon.
    pub gamma_id_efficiency: f64,
    /// σ(1/pT), GeV⁻¹.
    pub track_pt_res: f64,
    /// Impact-vertex resolution per coordinate, mm.
    pub vertex_res: f64,
}

impl DetectorScenario {
    pub fn validate(&self) -> Result<(), DetectorError> {
        let nonneg = [
            ("ecal_stochastic", self.ecal_stochastic),
            ("ecal_constant", self.ecal_constant),
            ("pos_res_stochastic", self.pos_res_stochastic),
            ("pos_res_constant", self.pos_res_constant),
            ("photon_threshold", self.photon_threshold),
            ("fake_rate", self.fake_rate),
            ("fake_energy_mean", self.fake_energy_mean),
            ("merge_distance", self.merge_distance),
            ("gamma_pi0_sep_max_energy", self.gamma_pi0_sep_max_energy),
            ("track_pt_res", self.track_pt_res),
            ("vertex_res", self.vertex_res),
        ];
        for (key, v) in nonneg {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(DetectorError::Config(format!("[{}] {key} must be a finite value >= 0", self.name)));
            }
        }
        if !(self.ecal_radius > 0.0) {
            return Err(DetectorError::Config(format!("[{}] ecal_radius must be > 0", self.name)));
        }
        if !(0.0..=1.0).contains(&self.gamma_id_efficiency) {
            return Err(DetectorError::Config(format!("[{}] gamma_id_efficiency must lie in [0, 1]", self.name)));
        }
        Ok(())
    }

    /// Relative energy resolution at true energy `e`.
    pub fn relative_energy_resolution(&self, e: f64) -> f64 {
        (self.ecal_stochastic / e.sqrt()).hypot(self.ecal_constant)
    }

    /// Position resolution on the ECAL face at true energy `e`, mm.
    pub fn position_resolution(&self, e: f64) -> f64 {
        (self.pos_res_stochastic / e.sqrt()).hypot(self.pos_res_constant)
    }

    /// Ideal detector: no smearing, no threshold, no fakes, no merging, full photon ID.
    pub fn perfect() -> Self {
        DetectorScenario {
            name: "perfect".into(),
            ecal_stochastic: 0.0,
            ecal_constant: 0.0,
            pos_res_stochastic: 0.0,
            pos_res_constant: 0.0,
            ecal_radius: 1800.0,
            photon_threshold: 0.0,
            fake_rate: 0.0,
            fake_energy_mean: 0.3,
            merge_distance: 0.0,
            pi0_mass_fit_enabled: true,
            gamma_pi0_sep_max_energy: 35.0,
            gamma_id_efficiency: 1.0,
            track_pt_res: 0.0,
            vertex_res: 0.0,
        }
    }
}

/// Named scenarios, one TOML table per scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet {
    scenarios: BTreeMap<String, DetectorScenario>,
}

impl ScenarioSet {
    pub fn parse(text: &str) -> Result<Self, DetectorError> {
        let raw: BTreeMap<String, DetectorScenario> =
            toml::from_str(text).map_err(|e| DetectorError::Config(format!("scenario config: {e}")))?;
        let mut scenarios = BTreeMap::new();
        for (name, mut s) in raw {
            s.name = name.clone();
            s.validate()?;
            scenarios.insert(name, s);
        }
        Ok(ScenarioSet { scenarios })
    }

    pub fn load(path: &Path) -> Result<Self, DetectorError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DetectorError::Config(format!("scenario config '{}': {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `crystal-ref`, `cepc-like`, `ultra-granular` and `perfect`.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_SCENARIOS).expect("built-in scenarios are valid")
    }

    pub fn get(&self, name: &str) -> Result<&DetectorScenario, DetectorError> {
        self.scenarios
            .get(name)
            .ok_or_else(|| DetectorError::MissingScenario(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.scenarios.keys().map(String::as_str)
    }
}
