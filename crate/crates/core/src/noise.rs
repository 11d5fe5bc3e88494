//! Shot-noise kernel: spectral densities, quadrature variances, squeezing.
//!
//! Everything here works in reduced units. Voltages are `u = eV_dc/hbar*omega`
//! and `z = eV_ac/hbar*omega0`, temperature is `theta_T = k_B T/hbar*omega`,
//! and spectral densities are in units of `hbar*omega/R`. The drive frequency
//! is `omega0 = 2*omega/p` with the harmonic order `p` either 1 or 2, so one
//! drive photon spans `2/p` measurement photons.

use serde::{Serialize, Serializer};

use crate::constants::{BOLTZMANN, ELEMENTARY_CHARGE, PLANCK};
use crate::error::{Error, Result};
use crate::specfun::{bessel_j_all, x_coth_x, BesselSeries, MAX_BESSEL_ARG};

/// Orders kept beyond the classical turning point `n ~ z`, where J_n(z)
/// decays faster than exponentially.
const TRUNCATION_MARGIN: usize = 40;

/// Harmonic order of the ac drive: the drive frequency is `2*omega/p` for
/// measurement frequency `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Harmonic {
    /// Drive at twice the measurement frequency (p = 1).
    P1,
    /// Drive at the measurement frequency (p = 2).
    P2,
}

impl Harmonic {
    pub fn index(self) -> i32 {
        match self {
            Harmonic::P1 => 1,
            Harmonic::P2 => 2,
        }
    }

    pub fn from_index(p: i32) -> Result<Self> {
        match p {
            1 => Ok(Harmonic::P1),
            2 => Ok(Harmonic::P2),
            other => Err(Error::invalid("p", format!("must be 1 or 2, got {other}"))),
        }
    }

    /// Photon-number step of one drive quantum in measurement photons:
    /// `hbar*omega0 / hbar*omega = 2/p`.
    pub fn photon_step(self) -> f64 {
        2.0 / self.index() as f64
    }

    /// Drive frequency in hertz for a given measurement frequency in hertz.
    pub fn drive_frequency(self, measurement_frequency: f64) -> f64 {
        2.0 * measurement_frequency / self.index() as f64
    }
}

impl Serialize for Harmonic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i32(self.index())
    }
}

/// Static junction properties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JunctionParams {
    /// Tunnel resistance in ohms.
    pub resistance: f64,
    /// Electron temperature in kelvin.
    pub electron_temperature: f64,
}

impl JunctionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.resistance.is_finite() && self.resistance > 0.0) {
            return Err(Error::invalid(
                "resistance",
                format!("must be positive and finite, got {}", self.resistance),
            ));
        }
        if !(self.electron_temperature.is_finite() && self.electron_temperature >= 0.0) {
            return Err(Error::invalid(
                "electron_temperature",
                format!(
                    "must be non-negative and finite, got {}",
                    self.electron_temperature
                ),
            ));
        }
        Ok(())
    }
}

/// Instrument settings for one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriveParams {
    /// Measurement frequency omega/2pi in hertz.
    pub measurement_frequency: f64,
    /// Harmonic order of the drive.
    pub harmonic: Harmonic,
    /// Dc bias in volts.
    pub dc_bias: f64,
    /// Ac drive amplitude in volts, non-negative.
    pub ac_amplitude: f64,
    /// Quadrature detection phase in radians.
    pub quadrature_phase: f64,
}

impl DriveParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.measurement_frequency.is_finite() && self.measurement_frequency > 0.0) {
            return Err(Error::invalid(
                "measurement_frequency",
                format!(
                    "must be positive and finite, got {}",
                    self.measurement_frequency
                ),
            ));
        }
        if !self.dc_bias.is_finite() {
            return Err(Error::invalid(
                "dc_bias",
                format!("must be finite, got {}", self.dc_bias),
            ));
        }
        if !(self.ac_amplitude.is_finite() && self.ac_amplitude >= 0.0) {
            return Err(Error::invalid(
                "ac_amplitude",
                format!("must be non-negative and finite, got {}", self.ac_amplitude),
            ));
        }
        if !self.quadrature_phase.is_finite() {
            return Err(Error::invalid(
                "quadrature_phase",
                format!("must be finite, got {}", self.quadrature_phase),
            ));
        }
        Ok(())
    }
}

/// Operating point in reduced units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedPoint {
    /// Dc bias, `eV_dc/hbar*omega`.
    pub u: f64,
    /// Drive strength, `eV_ac/hbar*omega0`, non-negative.
    pub z: f64,
    /// Temperature, `k_B T/hbar*omega`, non-negative.
    pub theta_t: f64,
    /// Harmonic order of the drive.
    pub p: Harmonic,
}

impl ReducedPoint {
    pub fn validate(&self) -> Result<()> {
        if !self.u.is_finite() {
            return Err(Error::invalid(
                "u",
                format!("must be finite, got {}", self.u),
            ));
        }
        if !(self.z.is_finite() && (0.0..=MAX_BESSEL_ARG).contains(&self.z)) {
            return Err(Error::invalid(
                "z",
                format!("must be in [0, {MAX_BESSEL_ARG:e}], got {}", self.z),
            ));
        }
        if !(self.theta_t.is_finite() && self.theta_t >= 0.0) {
            return Err(Error::invalid(
                "theta_t",
                format!("must be non-negative and finite, got {}", self.theta_t),
            ));
        }
        Ok(())
    }

    fn assert_valid(&self) {
        if let Err(e) = self.validate() {
            panic!("invalid reduced point: {e}");
        }
    }
}

/// Quadrature decomposition at one operating point, reduced units.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NoiseResult {
    /// Phase-averaged photo-assisted spectral density.
    pub s_tilde: f64,
    /// Noise-dynamics correlator splitting the quadratures.
    pub x_corr: f64,
    /// Variance of the in-phase quadrature, `s_tilde + x_corr`.
    pub var_a: f64,
    /// Variance of the out-of-phase quadrature, `s_tilde - x_corr`.
    pub var_b: f64,
    /// Smaller of the two variances.
    pub min_quadrature: f64,
    /// `min_quadrature` over the equilibrium vacuum level at the same
    /// temperature; below 1 means squeezed.
    pub squeeze_ratio: f64,
    /// Squeezing in decibels, `10 log10(squeeze_ratio)`.
    pub squeeze_db: f64,
}

/// Equilibrium finite-frequency spectral density at voltage `v` (in units of
/// `hbar*omega/e`, so the argument already contains the photon offset):
/// `v coth(v/2 theta_T)`, with the limits `|v|` at zero temperature and
/// `2 theta_T` at zero voltage.
pub fn s0(v: f64, theta_t: f64) -> f64 {
    if theta_t == 0.0 {
        v.abs()
    } else {
        2.0 * theta_t * x_coth_x(v / (2.0 * theta_t))
    }
}

/// Finite-frequency shot noise without drive: the mean of `s0` at the two
/// photon sidebands `u +- 1`. At zero temperature this is exactly
/// `max(|u|, 1)`: flat vacuum plateau below threshold, linear above.
pub fn s_finite_freq(u: f64, theta_t: f64) -> f64 {
    if theta_t == 0.0 {
        u.abs().max(1.0)
    } else {
        0.5 * (s0(u + 1.0, theta_t) + s0(u - 1.0, theta_t))
    }
}

/// Equilibrium vacuum reference level, `coth(1/2 theta_T)`; equals 1 at zero
/// temperature. Squeezing is always quoted against this.
pub fn vacuum_noise(theta_t: f64) -> f64 {
    s_finite_freq(0.0, theta_t)
}

/// Truncation order for the photo-assisted sums. Orders beyond `ceil(z)`
/// contribute at the level of the squared evanescent Bessel tail; the margin
/// leaves that tail below 1e-30.
fn truncation_order(z: f64, p: Harmonic) -> usize {
    z.ceil() as usize + p.index() as usize + TRUNCATION_MARGIN
}

fn bessel_for_sum(z: f64, max_order: usize) -> BesselSeries {
    bessel_j_all(z, max_order).expect("z validated to [0, MAX_BESSEL_ARG]")
}

/// Phase-averaged photo-assisted spectral density at the default truncation
/// order. Panics if the point fails [`ReducedPoint::validate`].
pub fn photo_assisted_noise(point: ReducedPoint) -> f64 {
    photo_assisted_noise_with_order(point, truncation_order(point.z, point.p))
}

/// Photo-assisted spectral density with an explicit truncation order:
/// `sum_n J_n(z)^2 s_finite_freq(u + 2n/p)`.
pub fn photo_assisted_noise_with_order(point: ReducedPoint, n_max: usize) -> f64 {
    point.assert_valid();
    if point.z == 0.0 {
        return s_finite_freq(point.u, point.theta_t);
    }
    let series = bessel_for_sum(point.z, n_max);
    let step = point.p.photon_step();
    let n_max = n_max as i32;
    let mut sum = 0.0;
    for n in -n_max..=n_max {
        let j = series.get(n);
        if j == 0.0 {
            continue;
        }
        sum += j * j * s_finite_freq(point.u + step * n as f64, point.theta_t);
    }
    sum
}

/// Noise-dynamics correlator at the default truncation order. Panics if the
/// point fails [`ReducedPoint::validate`].
pub fn noise_dynamics_x(point: ReducedPoint) -> f64 {
    noise_dynamics_x_with_order(point, truncation_order(point.z, point.p))
}

/// Noise-dynamics correlator with an explicit truncation order:
/// `(1/2) sum_n J_n(z) J_{n+p}(z) [s0(u + 1 + 2n/p) + (-1)^p s0(u - 1 - 2n/p)]`.
pub fn noise_dynamics_x_with_order(point: ReducedPoint, n_max: usize) -> f64 {
    point.assert_valid();
    if point.z == 0.0 {
        return 0.0;
    }
    let p = point.p.index();
    let series = bessel_for_sum(point.z, n_max + p as usize);
    let step = point.p.photon_step();
    let parity = if p % 2 == 0 { 1.0 } else { -1.0 };
    let n_max = n_max as i32;
    let mut sum = 0.0;
    for n in -n_max..=n_max {
        let w = series.get(n) * series.get(n + p);
        if w == 0.0 {
            continue;
        }
        let shift = 1.0 + step * n as f64;
        sum +=
            w * (s0(point.u + shift, point.theta_t) + parity * s0(point.u - shift, point.theta_t));
    }
    0.5 * sum
}

/// Both quadrature variances, their minimum, and the squeezing ratio against
/// the vacuum level. `var_a + var_b == 2 * s_tilde` holds bitwise.
pub fn quadrature_variances(point: ReducedPoint) -> NoiseResult {
    let s = photo_assisted_noise(point);
    let x = noise_dynamics_x(point);
    let var_a = s + x;
    let var_b = s - x;
    let s_tilde = 0.5 * (var_a + var_b);
    let min_quadrature = var_a.min(var_b);
    let squeeze_ratio = min_quadrature / vacuum_noise(point.theta_t);
    NoiseResult {
        s_tilde,
        x_corr: x,
        var_a,
        var_b,
        min_quadrature,
        squeeze_ratio,
        squeeze_db: 10.0 * squeeze_ratio.log10(),
    }
}

/// Variance of the quadrature detected at `phase` radians:
/// `s_tilde + x_corr cos(2 phase)`. Phase 0 is `var_a`, pi/2 is `var_b`.
pub fn variance_at_phase(point: ReducedPoint, phase: f64) -> f64 {
    let r = quadrature_variances(point);
    r.s_tilde + r.x_corr * (2.0 * phase).cos()
}

/// Variance averaged over the detection phase. The average of
/// `cos(2 phase)` vanishes, so this is exactly the photo-assisted density.
pub fn phase_averaged_variance(point: ReducedPoint) -> f64 {
    photo_assisted_noise(point)
}

/// Numerical phase average over `samples` equally spaced phases in [0, 2pi).
/// Self-check companion to [`phase_averaged_variance`]; agrees with it to
/// rounding for `samples >= 3`.
pub fn phase_averaged_variance_sampled(point: ReducedPoint, samples: usize) -> f64 {
    assert!(samples > 0, "need at least one phase sample");
    let r = quadrature_variances(point);
    let mut acc = 0.0;
    for k in 0..samples {
        let phase = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
        acc += r.s_tilde + r.x_corr * (2.0 * phase).cos();
    }
    acc / samples as f64
}

/// Convert SI instrument settings to the reduced operating point.
pub fn to_reduced(junction: &JunctionParams, drive: &DriveParams) -> Result<ReducedPoint> {
    junction.validate()?;
    drive.validate()?;
    let photon = PLANCK * drive.measurement_frequency;
    let drive_photon = PLANCK * drive.harmonic.drive_frequency(drive.measurement_frequency);
    Ok(ReducedPoint {
        u: ELEMENTARY_CHARGE * drive.dc_bias / photon,
        z: ELEMENTARY_CHARGE * drive.ac_amplitude / drive_photon,
        theta_t: BOLTZMANN * junction.electron_temperature / photon,
        p: drive.harmonic,
    })
}

/// Noise temperature in kelvin of a spectral density given in reduced units
/// at the drive's measurement frequency: `hbar*omega * sd / (2 k_B)`.
pub fn noise_temperature(spectral_density: f64, drive: &DriveParams) -> Result<f64> {
    drive.validate()?;
    if !(spectral_density.is_finite() && spectral_density >= 0.0) {
        return Err(Error::invalid(
            "spectral_density",
            format!("must be non-negative and finite, got {spectral_density}"),
        ));
    }
    Ok(0.5 * PLANCK * drive.measurement_frequency * spectral_density / BOLTZMANN)
}
