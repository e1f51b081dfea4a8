//! Four-vector algebra, phase-space decay generation and the thrust event shape.
//!
//! Units: GeV for energies, momenta and masses; mm for lengths.

mod decay;
mod four_vector;
mod thrust;
mod vector;

pub use decay::{n_body_phase_space, random_direction, two_body_decay, two_body_momentum, MAX_BODIES};
pub use four_vector::{boost, invariant_mass, FourVector};
pub use thrust::{thrust, thrust_exhaustive, thrust_iterative, EXHAUSTIVE_LIMIT};
pub use vector::{UnitAxis, Vec3};

/// Largest negative `m²` (GeV²) accepted as rounding noise.
pub const MASS2_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KinematicsError {
    #[error("empty list of four-vectors")]
    EmptyInput,
    #[error("unphysical invariant mass squared {0:.3e} GeV^2")]
    Unphysical(f64),
    #[error("boost velocity |beta| = {0} is not below 1")]
    Superluminal(f64),
    #[error("decay below threshold: parent mass {parent} < daughter masses {daughters}")]
    BelowThreshold { parent: f64, daughters: f64 },
    #[error("multiplicity {0} outside the supported range")]
    Multiplicity(usize),
    #[error("degenerate event: no particle with non-zero momentum")]
    DegenerateEvent,
}
