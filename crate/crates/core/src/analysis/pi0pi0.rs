use rand::Rng;

use super::{best_companion, make_pi0, split_hemispheres, Cuts, Hemisphere, Pi0, Side};
use crate::detector::{reconstruct_secondary_vertex, DetectorScenario, PhotonOrigin, RecoEvent, ReconstructedPhoton};
use crate::evtgen::{Event, Flavour};

/// `B⁰ → π⁰π⁰` candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Pi0Pi0Candidate {
    pub side: Side,
    /// m(π⁰₁π⁰₂) from the (fitted) π⁰ momenta.
    pub mass: f64,
    /// m(4γ) from the raw photons.
    pub raw_mass: f64,
    pub energy: f64,
    pub pi0s: [Pi0; 2],
    pub photons: [ReconstructedPhoton; 4],
    /// Largest displaced two-track vertex distance in the search hemisphere, mm.
    pub max_vertex_distance: f64,
}

impl Pi0Pi0Candidate {
    pub fn passes(&self, cuts: &Cuts) -> bool {
        let c = &cuts.pi0pi0;
        c.mass_window.contains(self.mass)
            && self.energy > c.system_energy_min
            && self.max_vertex_distance <= c.vertex_veto_distance
            && self.pi0s.iter().all(|p| cuts.common.pi0_window.contains(p.raw_mass()))
    }

    pub fn has_fake_photon(&self) -> bool {
        self.photons.iter().any(|g| g.origin == PhotonOrigin::Fake)
    }

    pub fn is_signal(&self, event: &Event) -> bool {
        self.photons.iter().all(|g| super::photon_is_signal(event, g))
    }
}

/// Largest distance from the origin of a vertex formed by two tracks of the
/// hemisphere with compatible impact vertices; 0 without any such pair.
pub fn max_vertex_distance(h: &Hemisphere, match_distance: f64) -> f64 {
    let mut max = 0.0f64;
    for (a, ta) in h.tracks.iter().enumerate() {
        for tb in &h.tracks[a + 1..] {
            if (ta.impact_vertex - tb.impact_vertex).norm() >= match_distance {
                continue;
            }
            if let Ok((_, d)) = reconstruct_secondary_vertex(&[ta, tb]) {
                max = max.max(d);
            }
        }
    }
    max
}

fn search(h: &Hemisphere, fit: bool, cuts: &Cuts) -> Option<Pi0Pi0Candidate> {
    let c = &cuts.pi0pi0;
    let veto = max_vertex_distance(h, cuts.common.vertex_match_distance);
    if veto > c.vertex_veto_distance || h.photons.len() < 4 {
        return None;
    }
    let mut order: Vec<usize> = (0..h.photons.len()).collect();
    order.sort_by(|&a, &b| h.photons[b].e.total_cmp(&h.photons[a].e).then(a.cmp(&b)));
    let mut used = vec![false; h.photons.len()];

    let lead = order[0];
    let comp = best_companion(&h.photons, lead, &used, &cuts.common)?;
    let first = make_pi0(&h.photons, lead, comp, fit, &cuts.common)?;
    used[lead] = true;
    used[comp] = true;

    let lead2 = *order.iter().find(|&&i| !used[i])?;
    let comp2 = best_companion(&h.photons, lead2, &used, &cuts.common)?;
    let second = make_pi0(&h.photons, lead2, comp2, fit, &cuts.common)?;

    let raw = first.raw + second.raw;
    let sum = first.p + second.p;
    let cand = Pi0Pi0Candidate {
        side: h.side,
        mass: sum.mass(),
        raw_mass: raw.mass(),
        energy: sum.e,
        pi0s: [first, second],
        photons: [h.photons[lead], h.photons[comp], h.photons[lead2], h.photons[comp2]],
        max_vertex_distance: veto,
    };
    cand.passes(cuts).then_some(cand)
}

/// Each hemisphere is searched when the opposite one is b-tagged.
pub fn select_pi0pi0<R: Rng + ?Sized>(
    reco: &RecoEvent,
    flavour: Flavour,
    scenario: &DetectorScenario,
    cuts: &Cuts,
    rng: &mut R,
) -> Vec<Pi0Pi0Candidate> {
    let (plus, minus) = split_hemispheres(&reco.photons, &reco.tracks, reco.thrust_axis);
    // tag decisions for the minus and plus hemispheres, always drawn in this order
    let tag_minus = cuts.btag.tag(flavour, rng);
    let tag_plus = cuts.btag.tag(flavour, rng);
    let mut out = Vec::new();
    if tag_minus {
        out.extend(search(&plus, scenario.pi0_mass_fit_enabled, cuts));
    }
    if tag_plus {
        out.extend(search(&minus, scenario.pi0_mass_fit_enabled, cuts));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::{Pid, ReconstructedTrack};
    use crate::kinematics::{FourVector, Vec3};

    fn track(v: Vec3, charge: i32) -> ReconstructedTrack {
        ReconstructedTrack {
            p: FourVector::from_p_m(Vec3::new(0.5, 0.2, 3.0), 0.1396),
            charge,
            pid: Pid::Pion,
            impact_vertex: v,
            truth_index: 0,
        }
    }

    #[test]
    fn displaced_vertex_veto() {
        let cuts = Cuts::builtin();
        let v = Vec3::new(1.0, 0.0, 0.0);
        let h = Hemisphere { side: Side::Plus, photons: vec![], tracks: vec![track(v, 1), track(v, -1)] };
        let d = max_vertex_distance(&h, cuts.common.vertex_match_distance);
        assert!((d - 1.0).abs() < 1e-12);
        assert!(d > cuts.pi0pi0.vertex_veto_distance);
        let prompt = Hemisphere { side: Side::Plus, photons: vec![], tracks: vec![track(Vec3::ZERO, 1), track(v, -1)] };
        assert_eq!(max_vertex_distance(&prompt, cuts.common.vertex_match_distance), 0.0);
    }
}
