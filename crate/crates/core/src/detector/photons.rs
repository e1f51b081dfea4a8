use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson, StandardNormal};

use super::DetectorScenario;
use crate::constants::GAMMA;
use crate::evtgen::{Event, Status};
use crate::kinematics::{random_direction, FourVector, Vec3};

/// Smallest reconstructed photon energy after smearing, GeV.
pub const ENERGY_FLOOR: f64 = 0.001;

/// Lower bounds of the reported standard deviations, keeping the covariance
/// positive definite for an ideal detector. Smaller values let rounding noise
/// in m(γγ) dominate the χ² of a mass fit.
const MIN_SIGMA_E: f64 = 1e-6;
const MIN_SIGMA_ANGLE: f64 = 1e-7;

/// Where a reconstructed cluster came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhotonOrigin {
    /// A single truth photon (record index).
    Genuine(usize),
    /// Not produced by a photon.
    Fake,
    /// Overlapping photons reconstructed as one cluster; index of the most
    /// energetic truth photon.
    MergedPi0(usize),
}

impl PhotonOrigin {
    pub fn truth_index(&self) -> Option<usize> {
        match *self {
            PhotonOrigin::Genuine(i) | PhotonOrigin::MergedPi0(i) => Some(i),
            PhotonOrigin::Fake => None,
        }
    }
}

/// Measured ECAL cluster, treated as a massless photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructedPhoton {
    pub e: f64,
    pub theta: f64,
    pub phi: f64,
    /// Variances of `(E, θ, φ)`.
    pub cov_diag: [f64; 3],
    pub origin: PhotonOrigin,
}

impl ReconstructedPhoton {
    pub fn p4(&self) -> FourVector {
        FourVector::massless(self.e, self.theta, self.phi)
    }

    pub fn direction(&self) -> Vec3 {
        Vec3::from_angles(self.theta, self.phi)
    }
}

/// Smears a massless truth momentum with the scenario's energy and position
/// resolution. Covariances are evaluated at the true energy.
pub fn smear_photon<R: Rng + ?Sized>(
    truth: &FourVector,
    origin: PhotonOrigin,
    scenario: &DetectorScenario,
    rng: &mut R,
) -> ReconstructedPhoton {
    let e_true = truth.e;
    let theta = truth.theta();
    let phi = truth.phi();
    let z_e: f64 = StandardNormal.sample(rng);
    let z_u: f64 = StandardNormal.sample(rng);
    let z_v: f64 = StandardNormal.sample(rng);

    let rel = scenario.relative_energy_resolution(e_true);
    let e = (e_true * (1.0 + rel * z_e)).max(ENERGY_FLOOR);

    let sigma_pos = scenario.position_resolution(e_true);
    let radius = scenario.ecal_radius;
    let sin_theta = theta.sin().max(1e-6);
    let sigma_theta = sigma_pos / radius;
    let sigma_phi = sigma_pos / (radius * sin_theta);

    let mut th = theta + sigma_theta * z_u;
    let mut ph = phi + sigma_phi * z_v;
    if th < 0.0 {
        th = -th;
        ph += PI;
    } else if th > PI {
        th = 2.0 * PI - th;
        ph += PI;
    }
    if ph > PI {
        ph -= 2.0 * PI;
    } else if ph < -PI {
        ph += 2.0 * PI;
    }

    let sigma_e = (rel * e_true).max(MIN_SIGMA_E);
    ReconstructedPhoton {
        e,
        theta: th,
        phi: ph,
        cov_diag: [
            sigma_e * sigma_e,
            sigma_theta.max(MIN_SIGMA_ANGLE).powi(2),
            sigma_phi.max(MIN_SIGMA_ANGLE).powi(2),
        ],
        origin,
    }
}

/// Distance between two directions measured along the ECAL face, mm.
pub fn face_separation(a: Vec3, b: Vec3, radius: f64) -> f64 {
    let angle = a.cross(b).norm().atan2(a.dot(b));
    angle * radius
}

/// Bookkeeping of one reconstruction pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhotonCounts {
    pub above_threshold: usize,
    pub merges: usize,
    pub fakes: usize,
}

struct Cluster {
    p: FourVector,
    leading: usize,
    leading_e: f64,
    merged: bool,
}

/// Full photon reconstruction: threshold, merging, fakes, smearing.
pub fn reconstruct_photons<R: Rng + ?Sized>(
    event: &Event,
    scenario: &DetectorScenario,
    rng: &mut R,
) -> Vec<ReconstructedPhoton> {
    reconstruct_photons_counted(event, scenario, rng).0
}

pub fn reconstruct_photons_counted<R: Rng + ?Sized>(
    event: &Event,
    scenario: &DetectorScenario,
    rng: &mut R,
) -> (Vec<ReconstructedPhoton>, PhotonCounts) {
    let mut clusters: Vec<Cluster> = event
        .final_state()
        .filter(|(_, r)| r.pdg_id == GAMMA && r.status == Status::Final)
        .filter(|(_, r)| r.p.e >= scenario.photon_threshold && r.p.e > 0.0)
        .map(|(i, r)| Cluster { p: r.p, leading: i, leading_e: r.p.e, merged: false })
        .collect();
    let mut counts = PhotonCounts { above_threshold: clusters.len(), ..Default::default() };

    if scenario.merge_distance > 0.0 {
        loop {
            let mut best: Option<(usize, usize, f64)> = None;
            for i in 0..clusters.len() {
                let di = clusters[i].p.p3();
                for j in i + 1..clusters.len() {
                    let d = face_separation(di, clusters[j].p.p3(), scenario.ecal_radius);
                    if d < scenario.merge_distance && best.is_none_or(|(_, _, bd)| d < bd) {
                        best = Some((i, j, d));
                    }
                }
            }
            let Some((i, j, _)) = best else { break };
            let other = clusters.remove(j);
            let c = &mut clusters[i];
            c.p += other.p;
            if other.leading_e > c.leading_e {
                c.leading = other.leading;
                c.leading_e = other.leading_e;
            }
            c.merged = true;
            counts.merges += 1;
        }
    }

    let mut truth: Vec<(FourVector, PhotonOrigin)> = clusters
        .into_iter()
        .map(|c| {
            if c.merged {
                // a cluster is reconstructed as a single massless shower
                let dir = c.p.p3().unit().unwrap_or(Vec3::new(0.0, 0.0, 1.0));
                let d = dir * c.p.e;
                (FourVector::new(c.p.e, d.x, d.y, d.z), PhotonOrigin::MergedPi0(c.leading))
            } else {
                (c.p, PhotonOrigin::Genuine(c.leading))
            }
        })
        .collect();

    if scenario.fake_rate > 0.0 {
        let axis = event.quark_axis().unwrap_or(Vec3::new(0.0, 0.0, 1.0));
        let poisson = Poisson::new(scenario.fake_rate).expect("positive rate");
        let spectrum = Exp::new(1.0 / scenario.fake_energy_mean.max(1e-12)).expect("positive mean");
        for side in [1.0, -1.0] {
            let n = poisson.sample(rng) as usize;
            for _ in 0..n {
                let e = spectrum.sample(rng) + scenario.photon_threshold;
                let mut d = random_direction(rng);
                if d.dot(axis) * side < 0.0 {
                    d = -d;
                }
                let d = d * e;
                truth.push((FourVector::new(e, d.x, d.y, d.z), PhotonOrigin::Fake));
                counts.fakes += 1;
            }
        }
    }

    let photons = truth
        .iter()
        .map(|(p, origin)| smear_photon(p, *origin, scenario, rng))
        .collect();
    (photons, counts)
}

/// Outcome of the γ/π⁰ shower-shape identification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhotonId {
    SinglePhoton,
    Pi0Like,
}

/// Probability that a merged π⁰ cluster of energy `e` is recognised as π⁰-like:
/// one up to `max_energy`, then falling linearly to one half at twice that energy.
pub fn pi0_recognition_probability(e: f64, max_energy: f64) -> f64 {
    if e <= max_energy {
        1.0
    } else if e >= 2.0 * max_energy {
        0.5
    } else {
        1.0 - 0.5 * (e - max_energy) / max_energy
    }
}

/// Parametric γ/π⁰ separation.
pub fn gamma_pi0_separation<R: Rng + ?Sized>(
    cluster: &ReconstructedPhoton,
    scenario: &DetectorScenario,
    rng: &mut R,
) -> PhotonId {
    let u: f64 = rng.random();
    match cluster.origin {
        PhotonOrigin::MergedPi0(_) => {
            if u < pi0_recognition_probability(cluster.e, scenario.gamma_pi0_sep_max_energy) {
                PhotonId::Pi0Like
            } else {
                PhotonId::SinglePhoton
            }
        }
        PhotonOrigin::Genuine(_) => {
            if u < scenario.gamma_id_efficiency {
                PhotonId::SinglePhoton
            } else {
                PhotonId::Pi0Like
            }
        }
        PhotonOrigin::Fake => PhotonId::Pi0Like,
    }
}
