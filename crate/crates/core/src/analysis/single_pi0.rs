use super::{make_pi0, CommonCuts};
use crate::constants::{PI0, PI0_MASS};
use crate::detector::{reconstruct_photons, DetectorScenario};
use crate::evtgen::{single_particle_event, DecayTable};
use crate::parallel::map_indexed;
use crate::report::{core_width, PeakFit};
use crate::rng::{event_seed, stream, Stage};

/// Raw and fitted relative energy resolution of isolated π⁰s of one energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Pi0StudyBin {
    pub energy: f64,
    pub n_generated: u64,
    /// π⁰s with a photon pair in the mass window.
    pub n_reconstructed: u64,
    pub n_unconverged: u64,
    /// Core of (E_γγ − E)/E.
    pub raw: PeakFit,
    /// Core of (E_fit − E)/E over converged fits.
    pub fitted: PeakFit,
    pub raw_residuals: Vec<f64>,
    pub fitted_residuals: Vec<f64>,
}

enum Outcome {
    Lost,
    Unconverged(f64),
    Fitted(f64, f64),
}

/// Generates `n` π⁰ per energy, reconstructs them with `scenario` and
/// compares the γγ energy with the mass-constrained one. The pair closest to
/// the π⁰ mass inside the window is used.
pub fn single_pi0_study(
    table: &DecayTable,
    scenario: &DetectorScenario,
    cuts: &CommonCuts,
    energies: &[f64],
    n: u64,
    master_seed: u64,
) -> Result<Vec<Pi0StudyBin>, crate::report::ReportError> {
    let mut bins = Vec::new();
    for (b, &energy) in energies.iter().enumerate() {
        let outcomes = map_indexed(n, |i| {
            let id = b as u64 * n + i;
            let seed = event_seed(master_seed, id);
            let mut gen = stream(seed, Stage::Generation);
            let Ok(event) = single_particle_event(table, PI0, energy, id, seed, &mut gen) else {
                return Outcome::Lost;
            };
            let mut det = stream(seed, Stage::Detector);
            let photons = reconstruct_photons(&event, scenario, &mut det);
            let mut best: Option<(usize, usize, f64)> = None;
            for a in 0..photons.len() {
                for c in a + 1..photons.len() {
                    let m = (photons[a].p4() + photons[c].p4()).mass();
                    let metric = (m - PI0_MASS).abs();
                    if cuts.pi0_window.contains(m) && best.is_none_or(|(_, _, x)| metric < x) {
                        best = Some((a, c, metric));
                    }
                }
            }
            let Some((a, c, _)) = best else { return Outcome::Lost };
            let raw = (photons[a].e + photons[c].e - energy) / energy;
            match make_pi0(&photons, a, c, true, cuts) {
                Some(pi0) => Outcome::Fitted(raw, (pi0.p.e - energy) / energy),
                None => Outcome::Unconverged(raw),
            }
        });
        let mut raw = Vec::new();
        let mut fitted = Vec::new();
        let mut unconverged = 0;
        for o in outcomes {
            match o {
                Outcome::Lost => {}
                Outcome::Unconverged(r) => {
                    raw.push(r);
                    unconverged += 1;
                }
                Outcome::Fitted(r, f) => {
                    raw.push(r);
                    fitted.push(f);
                }
            }
        }
        bins.push(Pi0StudyBin {
            energy,
            n_generated: n,
            n_reconstructed: raw.len() as u64,
            n_unconverged: unconverged,
            raw: core_width(&raw)?,
            fitted: core_width(&fitted)?,
            raw_residuals: raw,
            fitted_residuals: fitted,
        });
    }
    Ok(bins)
}
