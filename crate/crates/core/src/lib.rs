//! Quantum shot-noise quadratures of an ac-driven tunnel junction.
//!
//! A tunnel junction biased with a dc voltage and driven by an ac excitation
//! at twice (or at) the measurement frequency emits current noise whose two
//! quadratures can be unbalanced: one quadrature drops below the vacuum
//! level. This crate evaluates the photo-assisted spectral density, the
//! noise-dynamics correlator that splits the quadratures, the resulting
//! variances, and the squeezing ratio against the vacuum reference. On top
//! of the kernel it provides parameter sweeps, squeezing optimization over
//! the dc/ac drive plane, and calibration fits that extract system gain,
//! amplifier noise, electron temperature, and drive amplitude from measured
//! noise-versus-bias curves.
//!
//! All spectral densities are expressed in reduced units of `hbar*omega/R`
//! with voltages in units of `hbar*omega/e` (`u = eV_dc/hbar*omega`,
//! `z = eV_ac/hbar*omega0`) and temperature as `theta_T = k_B T/hbar*omega`.
//! Conversions from SI instrument settings live in [`noise::to_reduced`].

pub mod calibrate;
pub mod constants;
pub mod error;
mod lm;
pub mod noise;
pub mod optimize;
pub mod specfun;

pub use error::{Error, Result};
