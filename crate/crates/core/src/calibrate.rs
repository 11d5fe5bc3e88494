//! Calibration fits: extract gain, amplifier noise, electron temperature,
//! and drive amplitude from measured noise-versus-bias curves.
//!
//! The measured curve model is `y_i = G * (S_amp + S(u_i))` with `S` the
//! undriven spectral density for the undriven fit and the photo-assisted
//! density for the driven fit. `G` absorbs the amplification chain and
//! bandwidth, `S_amp` is the amplifier noise referred to the input, both in
//! the same reduced units as `S`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::constants::{BOLTZMANN, ELEMENTARY_CHARGE, PLANCK};
use crate::error::{Error, Result};
use crate::lm::least_squares;
use crate::noise::{
    photo_assisted_noise, s_finite_freq, to_reduced, DriveParams, Harmonic, JunctionParams,
    ReducedPoint,
};

/// Cap on model-curve evaluations per fit.
const FIT_EVAL_BUDGET: usize = 10_000;
const FIT_MAX_ITER: usize = 300;
const MIN_CURVE_POINTS: usize = 8;

/// One sample of a measured noise curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    /// Dc bias in volts.
    pub bias: f64,
    /// Measured noise power in arbitrary detector units, positive.
    pub measured: f64,
}

/// A measured noise-versus-bias curve with its acquisition settings.
#[derive(Debug, Clone, Serialize)]
pub struct NoiseCurve {
    /// Measurement frequency in hertz.
    pub frequency: f64,
    /// Junction resistance in ohms.
    pub resistance: f64,
    pub points: Vec<CurvePoint>,
}

impl NoiseCurve {
    pub fn validate(&self) -> Result<()> {
        if !(self.frequency.is_finite() && self.frequency > 0.0) {
            return Err(Error::invalid(
                "frequency",
                format!("must be positive and finite, got {}", self.frequency),
            ));
        }
        if !(self.resistance.is_finite() && self.resistance > 0.0) {
            return Err(Error::invalid(
                "resistance",
                format!("must be positive and finite, got {}", self.resistance),
            ));
        }
        if self.points.len() < MIN_CURVE_POINTS {
            return Err(Error::invalid(
                "points",
                format!(
                    "need at least {MIN_CURVE_POINTS} points, got {}",
                    self.points.len()
                ),
            ));
        }
        for (i, pt) in self.points.iter().enumerate() {
            if !pt.bias.is_finite() {
                return Err(Error::invalid(
                    "bias",
                    format!("must be finite, got {} at row {i}", pt.bias),
                ));
            }
            if !(pt.measured.is_finite() && pt.measured > 0.0) {
                return Err(Error::invalid(
                    "measured",
                    format!(
                        "must be positive and finite, got {} at row {i}",
                        pt.measured
                    ),
                ));
            }
            if i > 0 && pt.bias <= self.points[i - 1].bias {
                return Err(Error::invalid(
                    "bias",
                    format!("must be strictly increasing, violated at row {i}"),
                ));
            }
        }
        Ok(())
    }

    /// Photon-threshold bias `hf/e` in volts.
    pub fn threshold_bias(&self) -> f64 {
        PLANCK * self.frequency / ELEMENTARY_CHARGE
    }
}

/// Calibration parameters extracted from a fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationFit {
    /// Detector gain, detector units per reduced noise unit.
    pub gain: f64,
    /// Amplifier noise referred to the input, reduced units.
    pub amp_noise: f64,
    /// Electron temperature in kelvin.
    pub temperature: f64,
    /// Fitted ac drive amplitude in volts; None for undriven fits.
    pub v_ac: Option<f64>,
    /// Root-mean-square residual in detector units.
    pub rms_residual: f64,
    /// Variance estimates of the fitted parameters, in fit order.
    pub covariance_diag: Vec<f64>,
    /// Model-curve evaluations spent.
    pub evaluations: usize,
}

impl CalibrationFit {
    fn validate_as_prior(&self) -> Result<()> {
        if !(self.gain.is_finite() && self.gain > 0.0) {
            return Err(Error::invalid(
                "gain",
                format!("must be positive and finite, got {}", self.gain),
            ));
        }
        if !(self.amp_noise.is_finite() && self.amp_noise >= 0.0) {
            return Err(Error::invalid(
                "amp_noise",
                format!("must be non-negative and finite, got {}", self.amp_noise),
            ));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::invalid(
                "temperature",
                format!("must be non-negative and finite, got {}", self.temperature),
            ));
        }
        Ok(())
    }
}

fn reduced_biases(curve: &NoiseCurve) -> Vec<f64> {
    let photon = PLANCK * curve.frequency;
    curve
        .points
        .iter()
        .map(|pt| ELEMENTARY_CHARGE * pt.bias / photon)
        .collect()
}

fn reduced_temperature(temperature: f64, frequency: f64) -> f64 {
    BOLTZMANN * temperature / (PLANCK * frequency)
}

/// Fit gain, amplifier noise, and electron temperature to an undriven
/// noise-versus-bias curve.
///
/// The curve must reach at least twice the photon threshold bias on both
/// sides and sample the sub-threshold plateau, otherwise the three
/// parameters are not separable and the fit is rejected as ill-conditioned.
/// `initial` overrides the built-in starting guess as
/// `[gain, amp_noise, temperature]`.
pub fn fit_undriven(curve: &NoiseCurve, initial: Option<[f64; 3]>) -> Result<CalibrationFit> {
    fit_undriven_with_budget(curve, initial, FIT_EVAL_BUDGET)
}

pub(crate) fn fit_undriven_with_budget(
    curve: &NoiseCurve,
    initial: Option<[f64; 3]>,
    budget: usize,
) -> Result<CalibrationFit> {
    curve.validate()?;
    check_undriven_span(curve)?;

    let us = reduced_biases(curve);
    let ys: Vec<f64> = curve.points.iter().map(|pt| pt.measured).collect();
    let frequency = curve.frequency;
    let m = ys.len();

    let x0 = match initial {
        Some(guess) => guess.to_vec(),
        None => initial_guess(&us, &ys).to_vec(),
    };

    let mut residuals = |p: &[f64], out: &mut [f64]| {
        let theta = reduced_temperature(p[2], frequency);
        for i in 0..m {
            out[i] = p[0] * (p[1] + s_finite_freq(us[i], theta)) - ys[i];
        }
    };
    // Probe scales: the gain guess for G, one reduced noise unit for the
    // amplifier, 10 mK for the temperature.
    let scales = [x0[0].abs().max(1e-300), 1.0, 0.01];
    let out = least_squares(
        &mut residuals,
        &x0,
        &[1e-300, 0.0, 0.0],
        &scales,
        m,
        FIT_MAX_ITER,
        budget,
    );
    debug_assert!(out.cost_trace.windows(2).all(|w| w[1] <= w[0]));

    let fit = CalibrationFit {
        gain: out.params[0],
        amp_noise: out.params[1],
        temperature: out.params[2],
        v_ac: None,
        rms_residual: (out.cost / m as f64).sqrt(),
        covariance_diag: out.covariance_diag,
        evaluations: out.evaluations,
    };
    if !out.converged {
        return Err(Error::FitDidNotConverge {
            iterations: out.iterations,
            best: Box::new(fit),
        });
    }
    Ok(fit)
}

/// Fit the ac drive amplitude to a driven curve, holding gain, amplifier
/// noise, and temperature fixed at previously calibrated values.
///
/// `drive_frequency` is the ac drive frequency in hertz; it must equal
/// `2 f / p` for the curve's measurement frequency `f` and a harmonic
/// order p of 1 or 2.
pub fn fit_drive_amplitude(
    curve: &NoiseCurve,
    fixed: &CalibrationFit,
    drive_frequency: f64,
) -> Result<CalibrationFit> {
    curve.validate()?;
    fixed.validate_as_prior()?;
    if !(drive_frequency.is_finite() && drive_frequency > 0.0) {
        return Err(Error::invalid(
            "drive_frequency",
            format!("must be positive and finite, got {drive_frequency}"),
        ));
    }
    let p_exact = 2.0 * curve.frequency / drive_frequency;
    let p_round = p_exact.round();
    if (p_exact - p_round).abs() > 1e-6 * p_exact.abs() || !(1.0..=2.0).contains(&p_round) {
        return Err(Error::invalid(
            "drive_frequency",
            format!(
                "must be 2f/p for harmonic order p in {{1, 2}}; \
                 got {drive_frequency} Hz against measurement at {} Hz",
                curve.frequency
            ),
        ));
    }
    let p = Harmonic::from_index(p_round as i32)?;

    let v_th = curve.threshold_bias();
    let max_abs = curve
        .points
        .iter()
        .map(|pt| pt.bias.abs())
        .fold(0.0, f64::max);
    if max_abs < v_th {
        return Err(Error::IllConditioned(format!(
            "driven curve must reach the photon threshold bias {:.3e} V, largest bias is {max_abs:.3e} V",
            v_th
        )));
    }

    let us = reduced_biases(curve);
    let ys: Vec<f64> = curve.points.iter().map(|pt| pt.measured).collect();
    let m = ys.len();
    let theta = reduced_temperature(fixed.temperature, curve.frequency);
    let drive_photon = PLANCK * drive_frequency;
    let gain = fixed.gain;
    let amp = fixed.amp_noise;

    let model_cost = |v_ac: f64| -> f64 {
        let z = ELEMENTARY_CHARGE * v_ac / drive_photon;
        let mut cost = 0.0;
        for i in 0..m {
            let s = photo_assisted_noise(ReducedPoint {
                u: us[i],
                z,
                theta_t: theta,
                p,
            });
            let r = gain * (amp + s) - ys[i];
            cost += r * r;
        }
        cost
    };

    // Coarse scan over drive strength picks the basin; the model is
    // oscillatory in z, so a cold start can trap the refinement.
    let mut scan_evals = 0usize;
    let mut best_v = 0.0;
    let mut best_cost = f64::INFINITY;
    for k in 0..=120 {
        let z = 0.05 * k as f64;
        let v_ac = z * drive_photon / ELEMENTARY_CHARGE;
        let cost = model_cost(v_ac);
        scan_evals += 1;
        if cost < best_cost {
            best_cost = cost;
            best_v = v_ac;
        }
    }

    let mut residuals = |pars: &[f64], out: &mut [f64]| {
        let z = ELEMENTARY_CHARGE * pars[0] / drive_photon;
        for i in 0..m {
            let s = photo_assisted_noise(ReducedPoint {
                u: us[i],
                z,
                theta_t: theta,
                p,
            });
            out[i] = gain * (amp + s) - ys[i];
        }
    };
    let out = least_squares(
        &mut residuals,
        &[best_v],
        &[0.0],
        &[v_th],
        m,
        FIT_MAX_ITER,
        FIT_EVAL_BUDGET.saturating_sub(scan_evals),
    );
    debug_assert!(out.cost_trace.windows(2).all(|w| w[1] <= w[0]));

    let fit = CalibrationFit {
        gain,
        amp_noise: amp,
        temperature: fixed.temperature,
        v_ac: Some(out.params[0]),
        rms_residual: (out.cost / m as f64).sqrt(),
        covariance_diag: out.covariance_diag,
        evaluations: out.evaluations + scan_evals,
    };
    if !out.converged {
        return Err(Error::FitDidNotConverge {
            iterations: out.iterations,
            best: Box::new(fit),
        });
    }
    Ok(fit)
}

/// Synthesize a measured curve from known parameters, for tests and fit
/// validation. `noise_level` is the relative standard deviation of the
/// multiplicative Gaussian noise; with level 0 the curve is exact and the
/// seed is unused. The same seed always yields the same curve.
pub fn synthesize_curve(
    junction: &JunctionParams,
    drive: &DriveParams,
    gain: f64,
    amp_noise: f64,
    biases: &[f64],
    noise_level: f64,
    seed: u64,
) -> Result<NoiseCurve> {
    junction.validate()?;
    drive.validate()?;
    if !(gain.is_finite() && gain > 0.0) {
        return Err(Error::invalid(
            "gain",
            format!("must be positive and finite, got {gain}"),
        ));
    }
    if !(amp_noise.is_finite() && amp_noise >= 0.0) {
        return Err(Error::invalid(
            "amp_noise",
            format!("must be non-negative and finite, got {amp_noise}"),
        ));
    }
    if !(noise_level.is_finite() && noise_level >= 0.0) {
        return Err(Error::invalid(
            "noise_level",
            format!("must be non-negative and finite, got {noise_level}"),
        ));
    }
    if biases.is_empty() {
        return Err(Error::invalid("biases", "must not be empty"));
    }
    for (i, b) in biases.iter().enumerate() {
        if !b.is_finite() {
            return Err(Error::invalid(
                "biases",
                format!("must be finite, got {b} at index {i}"),
            ));
        }
        if i > 0 && *b <= biases[i - 1] {
            return Err(Error::invalid(
                "biases",
                format!("must be strictly increasing, violated at index {i}"),
            ));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = biases
        .iter()
        .map(|&bias| {
            let mut d = *drive;
            d.dc_bias = bias;
            let point = to_reduced(junction, &d)?;
            let mut y = gain * (amp_noise + photo_assisted_noise(point));
            if noise_level > 0.0 {
                let g: f64 = StandardNormal.sample(&mut rng);
                y *= 1.0 + noise_level * g;
            }
            Ok(CurvePoint { bias, measured: y })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(NoiseCurve {
        frequency: drive.measurement_frequency,
        resistance: junction.resistance,
        points,
    })
}

fn check_undriven_span(curve: &NoiseCurve) -> Result<()> {
    let v_th = curve.threshold_bias();
    let lo = curve.points.first().map(|p| p.bias).unwrap_or(0.0);
    let hi = curve.points.last().map(|p| p.bias).unwrap_or(0.0);
    let has_plateau = curve.points.iter().any(|p| p.bias.abs() < v_th);
    let tol = 1.0 - 1e-9;
    if hi < 2.0 * v_th * tol || lo > -2.0 * v_th * tol || !has_plateau {
        return Err(Error::IllConditioned(format!(
            "bias span [{lo:.3e}, {hi:.3e}] V cannot separate gain, amplifier noise, \
             and temperature; need both wings past {:.3e} V and sub-threshold coverage",
            2.0 * v_th
        )));
    }
    Ok(())
}

/// Starting guess: the shot-noise wings `|u| >= 2` are linear with slope G,
/// the plateau level gives the amplifier offset, and the temperature starts
/// at a generic dilution-fridge 50 mK.
fn initial_guess(us: &[f64], ys: &[f64]) -> [f64; 3] {
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut n = 0.0;
    for (u, y) in us.iter().zip(ys) {
        if u.abs() >= 2.0 {
            let x = u.abs();
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            n += 1.0;
        }
    }
    let denom = n * sxx - sx * sx;
    let mut gain = if denom > 0.0 {
        (n * sxy - sx * sy) / denom
    } else {
        0.0
    };
    if !(gain.is_finite() && gain > 0.0) {
        let mean_y = ys.iter().sum::<f64>() / ys.len() as f64;
        let mean_u = us.iter().map(|u| u.abs()).sum::<f64>() / us.len() as f64;
        gain = (mean_y / (mean_u + 1.0)).max(1e-300);
    }

    let mut plateau = 0.0;
    let mut np = 0.0;
    for (u, y) in us.iter().zip(ys) {
        if u.abs() < 1.0 {
            plateau += y;
            np += 1.0;
        }
    }
    let amp = if np > 0.0 {
        (plateau / np / gain - 1.0).max(0.0)
    } else {
        0.0
    };
    [gain, amp, 0.05]
}
