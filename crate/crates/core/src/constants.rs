//! Physical constants, CODATA 2018 exact values.

/// Elementary charge in coulombs.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Planck constant in joule seconds.
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant in joule seconds.
pub const REDUCED_PLANCK: f64 = PLANCK / (2.0 * std::f64::consts::PI);

/// Boltzmann constant in joules per kelvin.
pub const BOLTZMANN: f64 = 1.380_649e-23;
