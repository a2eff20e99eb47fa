//! Thermal entanglement and quantum discord of two spins coupled by a
//! distance-dependent Herring-Flicker exchange `J(R) = 1.642 e^{-2R} R^{5/2}`
//! in an isotropic (XXX) Heisenberg interaction with a longitudinal field.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] small dense complex matrices (dimension 2 and 4), a cyclic
//!   Jacobi eigensolver, partial traces and von Neumann entropy.
//! * [`model`] the coupling law, the Hamiltonian and the two thermal-state
//!   constructions (closed-form X matrix and exact Gibbs state).
//! * [`correlations`] concurrence, projective-measurement discord and the
//!   Bell-diagonal closed form used as a cross-check.
//! * [`sweep`] parameter sweeps, CSV output and bisection threshold finders.

pub mod correlations;
pub mod error;
pub mod linalg;
pub mod model;
pub mod optimize;
pub mod sweep;

pub use error::{Error, Result};
