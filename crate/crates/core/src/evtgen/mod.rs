//! Toy Z → bb̄/cc̄ event generation: leading-hadron fragmentation, decay tables,
//! forced signal chains and the event file format.

pub mod chains;
mod config;
mod generator;
mod io;
mod record;

pub use config::{BSpecies, CSpecies, DecayChannel, DecayModel, DecayTable, Fragmentation, GeneratorConfig};
pub use generator::{
    decay_vertex_placement, filler_daughters, flight_distance, force_signal_chain, generate_event,
    generate_event_with, generate_signal_event, generate_template, single_particle_event, validate_chain,
    EventTemplate, HemisphereSeed,
};
pub use io::{read_events, write_event, write_events};
pub use record::{Event, Flavour, ParticleRecord, Status};

use crate::kinematics::KinematicsError;

#[derive(Debug, thiserror::Error)]
pub enum EvtGenError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: invalid event record: {msg}")]
    Validation { line: usize, msg: String },
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
