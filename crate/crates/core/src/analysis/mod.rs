//! Benchmark selections: B_s/B⁰ → D_s π, B⁰ → π⁰π⁰ and B⁰ → K*γ, plus the
//! isolated-π⁰ resolution study.

mod cuts;
mod ds_pi;
mod kstar_gamma;
mod pi0;
mod pi0pi0;
mod single_pi0;

pub use cuts::{BTagModel, Companion, CommonCuts, Cuts, DsPiCuts, KstarGammaCuts, Pi0Pi0Cuts, Window};
pub use ds_pi::{select_ds_pi, DsPiCandidate};
pub use kstar_gamma::{select_kstar_gamma, KstarGammaCandidate};
pub use pi0::{best_companion, make_pi0, Pi0};
pub use pi0pi0::{select_pi0pi0, Pi0Pi0Candidate};
pub use single_pi0::{single_pi0_study, Pi0StudyBin};

use rand::Rng;

use crate::detector::{PhotonOrigin, ReconstructedPhoton, ReconstructedTrack};
use crate::evtgen::{Event, Flavour};
use crate::kinematics::UnitAxis;
use crate::report::Histogram;

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("cuts configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hemisphere {
    pub side: Side,
    pub photons: Vec<ReconstructedPhoton>,
    pub tracks: Vec<ReconstructedTrack>,
}

/// Splits objects by the sign of `p·axis`; zero goes to the plus side.
pub fn split_hemispheres(
    photons: &[ReconstructedPhoton],
    tracks: &[ReconstructedTrack],
    axis: UnitAxis,
) -> (Hemisphere, Hemisphere) {
    let mut plus = Hemisphere { side: Side::Plus, photons: Vec::new(), tracks: Vec::new() };
    let mut minus = Hemisphere { side: Side::Minus, photons: Vec::new(), tracks: Vec::new() };
    for g in photons {
        if axis.dot(g.direction()) >= 0.0 {
            plus.photons.push(*g);
        } else {
            minus.photons.push(*g);
        }
    }
    for t in tracks {
        if axis.dot(t.p.p3()) >= 0.0 {
            plus.tracks.push(*t);
        } else {
            minus.tracks.push(*t);
        }
    }
    (plus, minus)
}

impl BTagModel {
    pub fn probability(&self, flavour: Flavour) -> f64 {
        match flavour {
            Flavour::B => self.eff_b,
            Flavour::C => self.mistag_c,
            Flavour::Uds => self.mistag_uds,
        }
    }

    /// Bernoulli draw for one hemisphere of an event of the given flavour.
    pub fn tag<R: Rng + ?Sized>(&self, flavour: Flavour, rng: &mut R) -> bool {
        rng.random::<f64>() < self.probability(flavour)
    }
}

/// Peak distance in units of the quadratic sum of the two widths.
pub fn bs_b0_separation(sigma_bs: f64, sigma_b0: f64, delta_m: f64) -> Result<f64, AnalysisError> {
    if !(sigma_bs > 0.0) || !(sigma_b0 > 0.0) {
        return Err(AnalysisError::Domain(format!("widths must be positive, got {sigma_bs} and {sigma_b0}")));
    }
    Ok(delta_m / sigma_bs.hypot(sigma_b0))
}

/// Expected signal decays among `n_z` Z decays: two hemispheres per event.
pub fn scale_yield(
    n_pass: u64,
    n_generated: u64,
    chain_br_product: f64,
    flavour_fraction: f64,
    species_fraction: f64,
    n_z: f64,
) -> Result<f64, AnalysisError> {
    if n_generated == 0 {
        return Err(AnalysisError::Domain("no generated events".into()));
    }
    for (name, f) in [("branching", chain_br_product), ("flavour", flavour_fraction), ("species", species_fraction)] {
        if !(0.0..=1.0).contains(&f) {
            return Err(AnalysisError::Domain(format!("{name} fraction {f} outside [0, 1]")));
        }
    }
    if !(n_z >= 0.0) {
        return Err(AnalysisError::Domain(format!("n_z must be >= 0, got {n_z}")));
    }
    let efficiency = n_pass as f64 / n_generated as f64;
    Ok(n_z * 2.0 * flavour_fraction * species_fraction * chain_br_product * efficiency)
}

/// Outcome of one channel over a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelResult {
    pub spectrum: Histogram,
    pub n_signal_pass: u64,
    pub n_background_pass: u64,
    pub efficiency: f64,
    pub scaled_yield: f64,
}

/// True when a reconstructed photon comes from the forced signal decay.
pub fn photon_is_signal(event: &Event, g: &ReconstructedPhoton) -> bool {
    match g.origin {
        PhotonOrigin::Genuine(i) => event.is_signal(i),
        PhotonOrigin::MergedPi0(_) | PhotonOrigin::Fake => false,
    }
}

pub fn track_is_signal(event: &Event, t: &ReconstructedTrack) -> bool {
    event.is_signal(t.truth_index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::{Pid, PhotonOrigin};
    use crate::kinematics::{FourVector, Vec3};

    fn photon(theta: f64, phi: f64) -> ReconstructedPhoton {
        ReconstructedPhoton { e: 1.0, theta, phi, cov_diag: [1.0; 3], origin: PhotonOrigin::Fake }
    }

    #[test]
    fn hemisphere_split() {
        let axis = UnitAxis::Z;
        let gs = [photon(0.1, 0.0), photon(3.0, 0.0), photon(std::f64::consts::FRAC_PI_2, 1.0)];
        let t = ReconstructedTrack {
            p: FourVector::from_p_m(Vec3::new(0.0, 0.0, -2.0), 0.14),
            charge: 1,
            pid: Pid::Pion,
            impact_vertex: Vec3::ZERO,
            truth_index: 0,
        };
        let (p, m) = split_hemispheres(&gs, &[t], axis);
        assert_eq!(p.photons.len(), 2);
        assert_eq!(m.photons.len(), 1);
        assert_eq!(m.tracks.len(), 1);
        assert_eq!(p.photons.len() + m.photons.len(), gs.len());
    }

    #[test]
    fn separation_values() {
        assert!((bs_b0_separation(0.1453 / 2f64.sqrt(), 0.1453 / 2f64.sqrt(), 0.0872).unwrap() - 0.600).abs() < 1e-3);
        assert!((bs_b0_separation(0.0545 / 2f64.sqrt(), 0.0545 / 2f64.sqrt(), 0.0872).unwrap() - 1.600).abs() < 1e-3);
        assert_eq!(bs_b0_separation(0.02, 0.03, 0.0).unwrap(), 0.0);
        assert_eq!(bs_b0_separation(0.02, 0.03, 0.1).unwrap(), bs_b0_separation(0.03, 0.02, 0.1).unwrap());
        assert!(bs_b0_separation(0.0, 0.03, 0.1).is_err());
    }

    #[test]
    fn yields() {
        let y = scale_yield(1, 1, 1.55e-6, 0.2158, 0.40, 1e9).unwrap();
        assert!((y - 267.6).abs() < 0.1);
        assert_eq!(scale_yield(0, 10, 1.55e-6, 0.2158, 0.40, 1e9).unwrap(), 0.0);
        assert_eq!(scale_yield(5, 5, 1.0, 1.0, 1.0, 1e9).unwrap(), 2e9);
        assert!(scale_yield(0, 0, 1.0, 1.0, 1.0, 1e9).is_err());
    }
}
