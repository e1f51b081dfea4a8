//! Parametric detector response: ECAL smearing, photon reconstruction,
//! γ/π⁰ identification, tracks and vertices.

mod photons;
mod scenario;
mod tracks;

pub use photons::{
    face_separation, gamma_pi0_separation, pi0_recognition_probability, reconstruct_photons,
    reconstruct_photons_counted, smear_photon, PhotonCounts, PhotonId, PhotonOrigin, ReconstructedPhoton,
    ENERGY_FLOOR,
};
pub use scenario::{DetectorScenario, ScenarioSet};
pub use tracks::{reconstruct_secondary_vertex, reconstruct_tracks, smear_track, Pid, ReconstructedTrack};

use rand::Rng;

use crate::evtgen::Event;
use crate::kinematics::{thrust, FourVector, UnitAxis};

#[derive(Debug, thiserror::Error)]
pub enum DetectorError {
    #[error("scenario configuration error: {0}")]
    Config(String),
    #[error("scenario section [{0}] not found")]
    MissingScenario(String),
    #[error("a vertex needs at least 2 tracks, got {0}")]
    InsufficientTracks(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Detector-level view of one event.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoEvent {
    pub event_id: u64,
    pub photons: Vec<ReconstructedPhoton>,
    pub tracks: Vec<ReconstructedTrack>,
    /// Thrust axis of all reconstructed objects.
    pub thrust_axis: UnitAxis,
    pub thrust: f64,
}

pub fn reconstruct_event<R: Rng + ?Sized>(event: &Event, scenario: &DetectorScenario, rng: &mut R) -> RecoEvent {
    let photons = reconstruct_photons(event, scenario, rng);
    let tracks = reconstruct_tracks(event, scenario, rng);
    let momenta: Vec<FourVector> =
        photons.iter().map(ReconstructedPhoton::p4).chain(tracks.iter().map(|t| t.p)).collect();
    let (t, axis) = thrust(&momenta).unwrap_or((1.0, UnitAxis::Z));
    RecoEvent { event_id: event.event_id, photons, tracks, thrust_axis: axis, thrust: t }
}
