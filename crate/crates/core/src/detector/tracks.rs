use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{DetectorError, DetectorScenario};
use crate::constants::{self, K_PLUS, PI_PLUS};
use crate::evtgen::{Event, ParticleRecord};
use crate::kinematics::{FourVector, Vec3};

/// Hadron identity, taken from truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pid {
    Pion,
    Kaon,
}

impl Pid {
    pub fn of(pdg: i32) -> Pid {
        if pdg.abs() == K_PLUS {
            Pid::Kaon
        } else {
            Pid::Pion
        }
    }

    pub fn mass(self) -> f64 {
        match self {
            Pid::Pion => constants::mass(PI_PLUS).unwrap_or(0.13957039),
            Pid::Kaon => constants::mass(K_PLUS).unwrap_or(0.493677),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructedTrack {
    /// Four-momentum under the `pid` mass hypothesis.
    pub p: FourVector,
    pub charge: i32,
    pub pid: Pid,
    /// Smeared production vertex, mm.
    pub impact_vertex: Vec3,
    pub truth_index: usize,
}

/// Smears a charged final-state particle: `σ(1/pT) = k`, direction unchanged,
/// vertex smeared by `vertex_res` per coordinate.
pub fn smear_track<R: Rng + ?Sized>(
    truth: &ParticleRecord,
    truth_index: usize,
    scenario: &DetectorScenario,
    rng: &mut R,
) -> ReconstructedTrack {
    let pid = Pid::of(truth.pdg_id);
    let p3 = truth.p.p3();
    let pt = truth.p.pt();
    let z: f64 = StandardNormal.sample(rng);
    let scale = if scenario.track_pt_res > 0.0 && pt > 0.0 {
        let inv = (1.0 / pt + scenario.track_pt_res * z).abs().max(1e-9);
        1.0 / (inv * pt)
    } else {
        1.0
    };
    let p = if scale == 1.0 { p3 } else { p3 * scale };

    let mut vertex = truth.production_vertex;
    let (zx, zy, zz): (f64, f64, f64) =
        (StandardNormal.sample(rng), StandardNormal.sample(rng), StandardNormal.sample(rng));
    if scenario.vertex_res > 0.0 {
        vertex = vertex + Vec3::new(zx, zy, zz) * scenario.vertex_res;
    }

    ReconstructedTrack {
        p: FourVector::from_p_m(p, pid.mass()),
        charge: constants::charge(truth.pdg_id).signum(),
        pid,
        impact_vertex: vertex,
        truth_index,
    }
}

/// Tracks for every charged final-state particle of the event.
pub fn reconstruct_tracks<R: Rng + ?Sized>(
    event: &Event,
    scenario: &DetectorScenario,
    rng: &mut R,
) -> Vec<ReconstructedTrack> {
    event
        .final_state()
        .filter(|(_, r)| constants::charge(r.pdg_id) != 0)
        .map(|(i, r)| smear_track(r, i, scenario, rng))
        .collect()
}

/// Vertex of a set of tracks as the mean of their impact vertices, with its
/// distance from the interaction point.
pub fn reconstruct_secondary_vertex(tracks: &[&ReconstructedTrack]) -> Result<(Vec3, f64), DetectorError> {
    if tracks.len() < 2 {
        return Err(DetectorError::InsufficientTracks(tracks.len()));
    }
    let sum: Vec3 = tracks.iter().map(|t| t.impact_vertex).sum();
    let v = sum * (1.0 / tracks.len() as f64);
    Ok((v, v.norm()))
}
