use rand::Rng;

use super::{Cuts, Side};
use crate::detector::{
    gamma_pi0_separation, reconstruct_secondary_vertex, DetectorScenario, PhotonId, RecoEvent, ReconstructedPhoton,
    ReconstructedTrack, Pid,
};
use crate::evtgen::Event;
use crate::kinematics::Vec3;

/// `B⁰ → K*⁰ γ`, `K*⁰ → K π` candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct KstarGammaCandidate {
    pub side: Side,
    pub mass: f64,
    pub m_kpi: f64,
    pub vertex: Vec3,
    pub vertex_distance: f64,
    pub photon_energy: f64,
    pub photon_id: PhotonId,
    pub system_energy: f64,
    pub kaon: ReconstructedTrack,
    pub pion: ReconstructedTrack,
    pub photon: ReconstructedPhoton,
}

impl KstarGammaCandidate {
    pub fn passes(&self, cuts: &Cuts) -> bool {
        let c = &cuts.kstar_gamma;
        c.vertex_ok(self.vertex_distance)
            && c.kpi_ok(self.m_kpi)
            && c.photon_ok(self.photon_energy)
            && c.system_ok(self.system_energy)
            && self.photon_id == PhotonId::SinglePhoton
            && self.kaon.charge + self.pion.charge == 0
    }

    pub fn is_signal(&self, event: &Event) -> bool {
        super::photon_is_signal(event, &self.photon)
            && super::track_is_signal(event, &self.kaon)
            && super::track_is_signal(event, &self.pion)
    }
}

/// Every (K, π, γ) combination of the event passing the cuts. Candidates are
/// not restricted to one hemisphere; `side` is that of the Kπ momentum.
pub fn select_kstar_gamma<R: Rng + ?Sized>(
    reco: &RecoEvent,
    scenario: &DetectorScenario,
    cuts: &Cuts,
    rng: &mut R,
) -> Vec<KstarGammaCandidate> {
    let c = &cuts.kstar_gamma;
    // identification is drawn once for every photon above the energy cut
    let photons: Vec<(ReconstructedPhoton, PhotonId)> = reco
        .photons
        .iter()
        .filter(|g| c.photon_ok(g.e))
        .map(|g| (*g, gamma_pi0_separation(g, scenario, rng)))
        .collect();

    let mut out = Vec::new();
    for k in reco.tracks.iter().filter(|t| t.pid == Pid::Kaon) {
        for pi in reco.tracks.iter().filter(|t| t.pid == Pid::Pion) {
            if k.charge + pi.charge != 0 {
                continue;
            }
            if (k.impact_vertex - pi.impact_vertex).norm() >= cuts.common.vertex_match_distance {
                continue;
            }
            let Ok((vertex, distance)) = reconstruct_secondary_vertex(&[k, pi]) else { continue };
            if !c.vertex_ok(distance) {
                continue;
            }
            let kpi = k.p + pi.p;
            let m_kpi = kpi.mass();
            if !c.kpi_ok(m_kpi) {
                continue;
            }
            let side = if reco.thrust_axis.dot(kpi.p3()) >= 0.0 { Side::Plus } else { Side::Minus };
            for (g, id) in &photons {
                if *id != PhotonId::SinglePhoton {
                    continue;
                }
                let sys = kpi + g.p4();
                if !c.system_ok(sys.e) {
                    continue;
                }
                out.push(KstarGammaCandidate {
                    side,
                    mass: sys.mass(),
                    m_kpi,
                    vertex,
                    vertex_distance: distance,
                    photon_energy: g.e,
                    photon_id: *id,
                    system_energy: sys.e,
                    kaon: *k,
                    pion: *pi,
                    photon: *g,
                });
            }
        }
    }
    out
}
