//! Fast simulation and analysis of electromagnetic-calorimeter scenarios for
//! heavy-flavour physics at the Z pole.
//!
//! The pipeline is: [`evtgen`] produces Z → qq̄ events, [`detector`] turns the
//! truth record into smeared photons and tracks, [`kinfit`] performs the
//! π⁰ mass-constrained fit, [`analysis`] runs the benchmark B-decay selections
//! and [`report`] turns the results into histograms, CSV, SVG and text.
//! [`run`] wires everything into reproducible batch runs.

pub mod analysis;
pub mod constants;
pub mod detector;
pub mod evtgen;
pub mod format;
pub mod kinematics;
pub mod kinfit;
pub mod parallel;
pub mod report;
pub mod rng;
pub mod run;
