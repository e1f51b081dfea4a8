use std::cmp::Ordering;

use super::{make_pi0, split_hemispheres, Cuts, Hemisphere, Pi0, Side};
use crate::detector::{DetectorScenario, Pid, RecoEvent, ReconstructedPhoton, ReconstructedTrack};
use crate::evtgen::Event;
use crate::kinematics::FourVector;

/// `B → D_s π` candidate with `D_s → φ ρ`, `φ → K⁺K⁻`, `ρ → π π⁰`.
#[derive(Debug, Clone, PartialEq)]
pub struct DsPiCandidate {
    pub side: Side,
    pub m_kk: f64,
    pub m_rho: f64,
    pub m_ds: f64,
    pub m_b: f64,
    pub e_b: f64,
    pub pi0: Pi0,
    pub kaons: [ReconstructedTrack; 2],
    pub rho_pion: ReconstructedTrack,
    pub bachelor: ReconstructedTrack,
    pub photons: [ReconstructedPhoton; 2],
}

impl DsPiCandidate {
    /// Re-applies every cut to the stored quantities.
    pub fn passes(&self, cuts: &Cuts) -> bool {
        let c = &cuts.ds_pi;
        c.phi_window.contains(self.m_kk)
            && c.rho_window.contains(self.m_rho)
            && c.ds_window.contains(self.m_ds)
            && cuts.common.pi0_window.contains(self.pi0.raw_mass())
            && self.kaons[0].charge + self.kaons[1].charge == 0
            && self.rho_pion.charge + self.bachelor.charge == 0
    }

    /// All constituents come from the forced signal decay.
    pub fn is_signal(&self, event: &Event) -> bool {
        self.photons.iter().all(|g| super::photon_is_signal(event, g))
            && self.kaons.iter().chain([&self.rho_pion, &self.bachelor]).all(|t| super::track_is_signal(event, t))
    }
}

fn select_hemisphere(h: &Hemisphere, fit: bool, cuts: &Cuts) -> Option<DsPiCandidate> {
    let c = &cuts.ds_pi;
    let kaons: Vec<&ReconstructedTrack> = h.tracks.iter().filter(|t| t.pid == Pid::Kaon).collect();
    let pions: Vec<&ReconstructedTrack> = h.tracks.iter().filter(|t| t.pid == Pid::Pion).collect();

    let mut phis = Vec::new();
    for (a, ka) in kaons.iter().enumerate() {
        for kb in &kaons[a + 1..] {
            if ka.charge + kb.charge != 0 {
                continue;
            }
            let p = ka.p + kb.p;
            if c.phi_window.contains(p.mass()) {
                phis.push((p, [**ka, **kb]));
            }
        }
    }
    if phis.is_empty() || pions.len() < 2 {
        return None;
    }

    // photon pairs in the π⁰ window, best mass metric first, then higher energy
    let mut pairs: Vec<(usize, usize, f64, f64)> = Vec::new();
    for i in 0..h.photons.len() {
        for j in i + 1..h.photons.len() {
            let p = h.photons[i].p4() + h.photons[j].p4();
            let m = p.mass();
            if cuts.common.pi0_window.contains(m) {
                pairs.push((i, j, (m - crate::constants::PI0_MASS).abs(), p.e));
            }
        }
    }
    pairs.sort_by(|a, b| a.2.total_cmp(&b.2).then(b.3.total_cmp(&a.3)));

    for (i, j, _, _) in pairs {
        let Some(pi0) = make_pi0(&h.photons, i, j, fit, &cuts.common) else { continue };
        let mut best: Option<DsPiCandidate> = None;
        for (phi, kk) in &phis {
            for (a, rp) in pions.iter().enumerate() {
                let rho = rp.p + pi0.p;
                let m_rho = rho.mass();
                if !c.rho_window.contains(m_rho) {
                    continue;
                }
                let ds = *phi + rho;
                let m_ds = ds.mass();
                if !c.ds_window.contains(m_ds) {
                    continue;
                }
                for (b, bp) in pions.iter().enumerate() {
                    if a == b || bp.charge + rp.charge != 0 {
                        continue;
                    }
                    let bv: FourVector = ds + bp.p;
                    let cand = DsPiCandidate {
                        side: h.side,
                        m_kk: phi.mass(),
                        m_rho,
                        m_ds,
                        m_b: bv.mass(),
                        e_b: bv.e,
                        pi0,
                        kaons: *kk,
                        rho_pion: **rp,
                        bachelor: **bp,
                        photons: [h.photons[i], h.photons[j]],
                    };
                    if best.as_ref().is_none_or(|x| cand.e_b.total_cmp(&x.e_b) == Ordering::Greater) {
                        best = Some(cand);
                    }
                }
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

/// At most one candidate per hemisphere: the one built on the photon pair
/// closest to the π⁰ mass, ties broken by the higher B energy.
pub fn select_ds_pi(reco: &RecoEvent, scenario: &DetectorScenario, cuts: &Cuts) -> Vec<DsPiCandidate> {
    let (plus, minus) = split_hemispheres(&reco.photons, &reco.tracks, reco.thrust_axis);
    [plus, minus]
        .iter()
        .filter_map(|h| select_hemisphere(h, scenario.pi0_mass_fit_enabled, cuts))
        .collect()
}
