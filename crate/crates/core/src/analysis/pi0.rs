use super::{Companion, CommonCuts};
use crate::constants::PI0_MASS;
use crate::detector::ReconstructedPhoton;
use crate::kinematics::FourVector;
use crate::kinfit::{chi2_probability, fit_pi0_mass, FitResult, PhotonParameters};

/// π⁰ candidate built from two photons of a list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pi0 {
    pub photons: [usize; 2],
    pub raw: FourVector,
    /// Four-momentum used downstream: fitted when a fit was made.
    pub p: FourVector,
    pub fit: Option<FitResult>,
}

impl Pi0 {
    pub fn raw_mass(&self) -> f64 {
        self.raw.mass()
    }

    pub fn metric(&self) -> f64 {
        (self.raw_mass() - PI0_MASS).abs()
    }
}

/// Pairs photons `i` and `j`. The raw mass must be inside the π⁰ window; with
/// `fit` the pair is mass-constrained and rejected unless the fit converged
/// with a χ² probability at or above the configured minimum.
pub fn make_pi0(photons: &[ReconstructedPhoton], i: usize, j: usize, fit: bool, cuts: &CommonCuts) -> Option<Pi0> {
    let raw = photons[i].p4() + photons[j].p4();
    if !cuts.pi0_window.contains(raw.mass()) {
        return None;
    }
    if !fit {
        return Some(Pi0 { photons: [i, j], raw, p: raw, fit: None });
    }
    let params = PhotonParameters::from_photons(&photons[i], &photons[j]);
    let r = fit_pi0_mass(&params, PI0_MASS).ok()?;
    if !r.converged {
        return None;
    }
    if cuts.fit_probability_min > 0.0 && chi2_probability(r.chi2).ok()? < cuts.fit_probability_min {
        return None;
    }
    Some(Pi0 { photons: [i, j], raw, p: r.fitted_pi0, fit: Some(r) })
}

/// Companion of photon `i` among the photons not in `used`: closest in
/// |m(γγ) − m(π⁰)| or in opening angle, per the cuts.
pub fn best_companion(photons: &[ReconstructedPhoton], i: usize, used: &[bool], cuts: &CommonCuts) -> Option<usize> {
    let gi = photons[i].p4();
    let di = photons[i].direction();
    let mut best: Option<(usize, f64)> = None;
    for (j, g) in photons.iter().enumerate() {
        if j == i || used[j] {
            continue;
        }
        let score = match cuts.companion {
            Companion::Mass => ((gi + g.p4()).mass() - PI0_MASS).abs(),
            Companion::Angle => di.cross(g.direction()).norm().atan2(di.dot(g.direction())),
        };
        if best.is_none_or(|(_, s)| score < s) {
            best = Some((j, score));
        }
    }
    best.map(|(j, _)| j)
}
