use std::path::Path;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::report::Section;

const DEFAULT_CUTS: &str = include_str!("../../configs/cuts.toml");

/// Open mass or energy interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Window { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }
}

impl From<[f64; 2]> for Window {
    fn from(v: [f64; 2]) -> Self {
        Window::new(v[0], v[1])
    }
}

impl From<Window> for [f64; 2] {
    fn from(w: Window) -> Self {
        [w.lo, w.hi]
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Companion {
    Mass,
    Angle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommonCuts {
    pub pi0_window: Window,
    pub companion: Companion,
    pub fit_probability_min: f64,
    pub vertex_match_distance: f64,
}

/// Parametric b-tagging: probability that a hemisphere is tagged, by flavour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BTagModel {
    pub eff_b: f64,
    pub mistag_c: f64,
    pub mistag_uds: f64,
}

impl Default for BTagModel {
    fn default() -> Self {
        BTagModel { eff_b: 0.90, mistag_c: 0.10, mistag_uds: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DsPiCuts {
    pub phi_window: Window,
    pub rho_window: Window,
    pub ds_window: Window,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pi0Pi0Cuts {
    pub vertex_veto_distance: f64,
    pub mass_window: Window,
    pub system_energy_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KstarGammaCuts {
    pub vertex_distance_min: f64,
    pub kpi_window: Window,
    pub photon_energy_min: f64,
    pub system_energy_min: f64,
}

impl KstarGammaCuts {
    pub fn vertex_ok(&self, distance: f64) -> bool {
        distance > self.vertex_distance_min
    }

    pub fn kpi_ok(&self, m: f64) -> bool {
        self.kpi_window.contains(m)
    }

    pub fn photon_ok(&self, e: f64) -> bool {
        e > self.photon_energy_min
    }

    pub fn system_ok(&self, e: f64) -> bool {
        e > self.system_energy_min
    }
}

/// All selection cuts. Every key must be present in a cuts file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cuts {
    pub common: CommonCuts,
    pub btag: BTagModel,
    pub ds_pi: DsPiCuts,
    pub pi0pi0: Pi0Pi0Cuts,
    pub kstar_gamma: KstarGammaCuts,
}

impl Cuts {
    pub fn parse(text: &str) -> Result<Self, AnalysisError> {
        let cuts: Cuts = toml::from_str(text).map_err(|e| AnalysisError::Config(e.to_string()))?;
        cuts.validate()?;
        Ok(cuts)
    }

    pub fn load(path: &Path) -> Result<Self, AnalysisError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AnalysisError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_CUTS).expect("built-in cuts are valid")
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        let windows = [
            ("common.pi0_window", self.common.pi0_window),
            ("ds_pi.phi_window", self.ds_pi.phi_window),
            ("ds_pi.rho_window", self.ds_pi.rho_window),
            ("ds_pi.ds_window", self.ds_pi.ds_window),
            ("pi0pi0.mass_window", self.pi0pi0.mass_window),
            ("kstar_gamma.kpi_window", self.kstar_gamma.kpi_window),
        ];
        for (key, w) in windows {
            if !(w.hi > w.lo) || !w.lo.is_finite() || !w.hi.is_finite() {
                return Err(AnalysisError::Config(format!("{key}: upper edge must exceed lower edge")));
            }
        }
        let probs = [
            ("common.fit_probability_min", self.common.fit_probability_min),
            ("btag.eff_b", self.btag.eff_b),
            ("btag.mistag_c", self.btag.mistag_c),
            ("btag.mistag_uds", self.btag.mistag_uds),
        ];
        for (key, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(AnalysisError::Config(format!("{key} must lie in [0, 1]")));
            }
        }
        let nonneg = [
            ("common.vertex_match_distance", self.common.vertex_match_distance),
            ("pi0pi0.vertex_veto_distance", self.pi0pi0.vertex_veto_distance),
            ("pi0pi0.system_energy_min", self.pi0pi0.system_energy_min),
            ("kstar_gamma.vertex_distance_min", self.kstar_gamma.vertex_distance_min),
            ("kstar_gamma.photon_energy_min", self.kstar_gamma.photon_energy_min),
            ("kstar_gamma.system_energy_min", self.kstar_gamma.system_energy_min),
        ];
        for (key, v) in nonneg {
            if !(v >= 0.0) {
                return Err(AnalysisError::Config(format!("{key} must be >= 0")));
            }
        }
        Ok(())
    }

    /// Effective cuts as report lines.
    pub fn report_section(&self) -> Section {
        let mut s = Section::new("cuts");
        let c = &self.common;
        s.push("common.pi0_window", c.pi0_window)
            .push("common.companion", format!("{:?}", c.companion).to_lowercase())
            .push("common.fit_probability_min", c.fit_probability_min)
            .push("common.vertex_match_distance", c.vertex_match_distance)
            .push("btag.eff_b", self.btag.eff_b)
            .push("btag.mistag_c", self.btag.mistag_c)
            .push("btag.mistag_uds", self.btag.mistag_uds)
            .push("ds_pi.phi_window", self.ds_pi.phi_window)
            .push("ds_pi.rho_window", self.ds_pi.rho_window)
            .push("ds_pi.ds_window", self.ds_pi.ds_window)
            .push("pi0pi0.vertex_veto_distance", self.pi0pi0.vertex_veto_distance)
            .push("pi0pi0.mass_window", self.pi0pi0.mass_window)
            .push("pi0pi0.system_energy_min", self.pi0pi0.system_energy_min)
            .push("kstar_gamma.vertex_distance_min", self.kstar_gamma.vertex_distance_min)
            .push("kstar_gamma.kpi_window", self.kstar_gamma.kpi_window)
            .push("kstar_gamma.photon_energy_min", self.kstar_gamma.photon_energy_min)
            .push("kstar_gamma.system_energy_min", self.kstar_gamma.system_energy_min);
        s
    }
}

impl Default for Cuts {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = Cuts::builtin();
        assert_eq!(c.common.pi0_window, Window::new(0.110, 0.160));
        assert_eq!(c.ds_pi.phi_window, Window::new(1.010, 1.030));
        assert_eq!(c.pi0pi0.mass_window, Window::new(4.0, 6.0));
        assert_eq!(c.kstar_gamma.vertex_distance_min, 0.050);
        assert_eq!(c.btag, BTagModel::default());
        assert_eq!(c.common.fit_probability_min, 0.0);
    }

    #[test]
    fn missing_key_is_named() {
        let text = DEFAULT_CUTS.replace("photon_energy_min = 5.0\n", "");
        let err = Cuts::parse(&text).unwrap_err().to_string();
        assert!(err.contains("photon_energy_min"), "{err}");
    }

    #[test]
    fn inverted_window_rejected() {
        let text = DEFAULT_CUTS.replace("rho_window = [0.600, 0.950]", "rho_window = [0.950, 0.600]");
        assert!(Cuts::parse(&text).is_err());
    }

    #[test]
    fn windows_are_open() {
        let w = Window::new(0.85, 1.0);
        assert!(!w.contains(0.85));
        assert!(w.contains(0.85f64.next_up()));
        assert!(!w.contains(1.0));
        assert!(w.contains(1.0f64.next_down()));
    }
}
