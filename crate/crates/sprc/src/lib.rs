//! Subspace predictive repetitive control (SPRC) for fault-tolerant individual
//! pitch control, together with a surrogate three-blade rotor to exercise it.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`] — square-root RLS, pseudo-inverse, Riccati solver, Welch PSD.
//! * [`plant`] — linear innovation-form surrogate with periodic loads and faults.
//! * [`sysid`] — periodic-difference regressors and per-blade Markov estimation.
//! * [`control`] — lifted model, 1P/2P basis projection, excitation, gain and θ update.
//! * [`baselines`] — constant-collective and Coleman-transform comparison controllers.
//! * [`metrics`] — SD/rSD, actuator duty cycle, band energies, window handling.
//! * [`harness`] — load cases, campaigns, persistence and comparison tables.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod control;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod numerics;
pub mod plant;
pub mod sysid;

pub use error::{Error, Result};

/// Number of blades (and of pitch inputs / load outputs).
pub const N_BLADES: usize = 3;
