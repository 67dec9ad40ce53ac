//! Desk-scale toolkit for weak-field gravito-electromagnetism (GEM).
//!
//! The crate covers four connected calculations:
//!
//! - [`gem_field`]: the rotating mass-shell "solenoid", its gravito-electric and
//!   gravito-magnetic fields, the gravitational vector potential `h`, loop
//!   integrals, gauge transforms, a Maxwell-like residual checker and
//!   test-particle trajectories.
//! - [`quantum_phase`]: minimal coupling `p - qA - mh`, the expanded
//!   Hamiltonian, Aharonov-Bohm phases, time holonomy and the London moment.
//! - [`cavity_spectrum`]: cylindrical cavity TE/TM frequencies, wire-split
//!   doublets and synthetic S21 traces.
//! - [`paramp`]: the Maxwell-stress pressure chain and the unseparated and
//!   separated parametric-oscillator thresholds, including a time-domain
//!   envelope integrator.
//!
//! All quantities are SI. Constants come from [`constants::PhysicalConstants`],
//! either CODATA values or the rounded values used for printed estimates.

// `!(x > 0.0)` is used on purpose so NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity_spectrum;
pub mod constants;
pub mod error;
pub mod gem_field;
pub mod ode;
pub mod paramp;
pub mod quantum_phase;

pub use constants::{ConstantsMode, PhysicalConstants};
pub use error::{Error, Result};

/// Cartesian 3-vector used throughout the crate.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Row-oriented numeric output with named columns, for CSV export.
pub trait Tabular {
    fn columns(&self) -> Vec<String>;
    fn rows(&self) -> Vec<Vec<f64>>;
}
