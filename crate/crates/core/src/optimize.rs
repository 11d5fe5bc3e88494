//! Squeezing optimization and parameter sweeps.
//!
//! The squeeze ratio is piecewise smooth but has kinks where `u + 2n/p`
//! crosses a photon threshold at zero temperature, so the search is
//! derivative-free: a coarse grid scan (parallelized) picks the basin, a
//! bounded Nelder-Mead simplex (or golden-section in one dimension)
//! refines it. Everything is deterministic; no randomness is involved.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::noise::{
    quadrature_variances, s_finite_freq, to_reduced, DriveParams, Harmonic, JunctionParams,
    NoiseResult, ReducedPoint,
};
use crate::specfun::MAX_BESSEL_ARG;

/// Grid resolution per axis of the coarse scan.
pub const GRID_POINTS: usize = 201;

/// Hard cap on objective evaluations per optimization call.
pub const MAX_EVALUATIONS: usize = 1_000_000;

const NM_MAX_ITER: usize = 400;
const GOLDEN_MAX_ITER: usize = 200;

/// Closed search interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let iv = Interval { lo, hi };
        iv.validate("interval")?;
        Ok(iv)
    }

    fn validate(&self, field: &'static str) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi) {
            return Err(Error::invalid(
                field,
                format!(
                    "must satisfy lo <= hi and be finite, got [{}, {}]",
                    self.lo, self.hi
                ),
            ));
        }
        Ok(())
    }

    fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Result of a squeezing search.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SqueezeOptimum {
    /// Reduced dc bias at the optimum.
    pub u_star: f64,
    /// Reduced drive strength at the optimum.
    pub z_star: f64,
    /// Minimal quadrature variance over the vacuum level.
    pub ratio: f64,
    /// The ratio in decibels.
    pub db: f64,
    /// Objective evaluations spent.
    pub evaluations: usize,
    /// Whether the refinement met its tolerance within budget.
    pub converged: bool,
}

struct Objective {
    theta_t: f64,
    p: Harmonic,
    evaluations: usize,
}

impl Objective {
    fn eval(&mut self, u: f64, z: f64) -> f64 {
        self.evaluations += 1;
        ratio_at(u, z, self.theta_t, self.p)
    }
}

fn ratio_at(u: f64, z: f64, theta_t: f64, p: Harmonic) -> f64 {
    quadrature_variances(ReducedPoint { u, z, theta_t, p }).squeeze_ratio
}

fn grid_coords(iv: Interval, n: usize) -> Vec<f64> {
    if iv.is_degenerate() || n == 1 {
        return vec![iv.lo];
    }
    (0..n)
        .map(|i| iv.lo + iv.width() * i as f64 / (n - 1) as f64)
        .collect()
}

/// Best grid node, ties broken toward smallest |u|, then smallest z, then
/// non-negative u, so symmetric landscapes yield a canonical optimum.
fn pick_best(nodes: &[(f64, f64, f64)]) -> (f64, f64, f64) {
    let f_min = nodes
        .iter()
        .map(|&(_, _, f)| f)
        .fold(f64::INFINITY, f64::min);
    let tie_tol = 1e-12 * f_min.abs().max(1.0);
    let mut best: Option<(f64, f64, f64)> = None;
    for &(u, z, f) in nodes {
        if f > f_min + tie_tol {
            continue;
        }
        let better = match best {
            None => true,
            Some((bu, bz, _)) => {
                let key = (u.abs(), z, u.is_sign_negative() as u8);
                let best_key = (bu.abs(), bz, bu.is_sign_negative() as u8);
                key.0
                    .total_cmp(&best_key.0)
                    .then(key.1.total_cmp(&best_key.1))
                    .then(key.2.cmp(&best_key.2))
                    == std::cmp::Ordering::Less
            }
        };
        if better {
            best = Some((u, z, f));
        }
    }
    best.expect("grid has at least one node")
}

/// Minimize the squeeze ratio over the (u, z) box.
///
/// Grid scan over `GRID_POINTS` per non-degenerate axis, then simplex
/// refinement. The refined value never exceeds the best grid value.
pub fn optimize_squeeze(
    theta_t: f64,
    p: Harmonic,
    u_bounds: Interval,
    z_bounds: Interval,
) -> Result<SqueezeOptimum> {
    validate_theta(theta_t)?;
    u_bounds.validate("u_bounds")?;
    z_bounds.validate("z_bounds")?;
    if z_bounds.lo < 0.0 || z_bounds.hi > MAX_BESSEL_ARG {
        return Err(Error::invalid(
            "z_bounds",
            format!(
                "must lie within [0, {MAX_BESSEL_ARG:e}], got [{}, {}]",
                z_bounds.lo, z_bounds.hi
            ),
        ));
    }

    let us = grid_coords(u_bounds, GRID_POINTS);
    let zs = grid_coords(z_bounds, GRID_POINTS);
    let nodes: Vec<(f64, f64, f64)> = us
        .par_iter()
        .flat_map_iter(|&u| zs.iter().map(move |&z| (u, z)))
        .map(|(u, z)| (u, z, ratio_at(u, z, theta_t, p)))
        .collect();
    let mut evals = nodes.len();
    let (gu, gz, gf) = pick_best(&nodes);

    let budget = MAX_EVALUATIONS.saturating_sub(evals);
    let mut obj = Objective {
        theta_t,
        p,
        evaluations: 0,
    };

    let u_step = if u_bounds.is_degenerate() {
        0.0
    } else {
        u_bounds.width() / (GRID_POINTS - 1) as f64
    };
    let z_step = if z_bounds.is_degenerate() {
        0.0
    } else {
        z_bounds.width() / (GRID_POINTS - 1) as f64
    };

    let (u_star, z_star, ratio, converged) =
        match (u_bounds.is_degenerate(), z_bounds.is_degenerate()) {
            (true, true) => (gu, gz, gf, true),
            (false, true) => {
                let (u, f, ok) = refine_1d(
                    |u, o: &mut Objective| o.eval(u, gz),
                    &mut obj,
                    u_bounds,
                    gu,
                    gf,
                    u_step,
                    budget,
                );
                (u, gz, f, ok)
            }
            (true, false) => {
                let (z, f, ok) = refine_1d(
                    |z, o: &mut Objective| o.eval(gu, z),
                    &mut obj,
                    z_bounds,
                    gz,
                    gf,
                    z_step,
                    budget,
                );
                (gu, z, f, ok)
            }
            (false, false) => refine_2d(
                &mut obj,
                u_bounds,
                z_bounds,
                (gu, gz, gf),
                (u_step, z_step),
                budget,
            ),
        };
    evals += obj.evaluations;

    Ok(SqueezeOptimum {
        u_star,
        z_star,
        ratio,
        db: 10.0 * ratio.log10(),
        evaluations: evals,
        converged,
    })
}

/// Minimize the squeeze ratio over dc bias at a fixed drive strength.
pub fn optimize_bias_at_fixed_drive(
    z: f64,
    theta_t: f64,
    p: Harmonic,
    u_bounds: Interval,
) -> Result<SqueezeOptimum> {
    if !(z.is_finite() && (0.0..=MAX_BESSEL_ARG).contains(&z)) {
        return Err(Error::invalid(
            "z",
            format!("must be in [0, {MAX_BESSEL_ARG:e}], got {z}"),
        ));
    }
    optimize_squeeze(theta_t, p, u_bounds, Interval { lo: z, hi: z })
}

fn validate_theta(theta_t: f64) -> Result<()> {
    if !(theta_t.is_finite() && theta_t >= 0.0) {
        return Err(Error::invalid(
            "theta_t",
            format!("must be non-negative and finite, got {theta_t}"),
        ));
    }
    Ok(())
}

/// Golden-section refinement around a grid winner. Tracks the best point
/// ever evaluated, so the result cannot regress below the grid value.
// `spent` counts objective evaluations (seeded with the two probes), not
// loop iterations.
#[allow(clippy::explicit_counter_loop)]
fn refine_1d<F>(
    mut f: F,
    obj: &mut Objective,
    bounds: Interval,
    x0: f64,
    f0: f64,
    step: f64,
    budget: usize,
) -> (f64, f64, bool)
where
    F: FnMut(f64, &mut Objective) -> f64,
{
    let mut lo = bounds.clamp(x0 - step);
    let mut hi = bounds.clamp(x0 + step);
    if lo == hi {
        return (x0, f0, true);
    }
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut best = (x0, f0);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c, obj);
    let mut fd = f(d, obj);
    let mut spent = 2;
    let mut converged = false;
    for _ in 0..GOLDEN_MAX_ITER {
        if fc < best.1 {
            best = (c, fc);
        }
        if fd < best.1 {
            best = (d, fd);
        }
        if (hi - lo).abs() < 1e-10 * (1.0 + x0.abs()) {
            converged = true;
            break;
        }
        if spent + 1 > budget {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c, obj);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d, obj);
        }
        spent += 1;
    }
    (best.0, best.1, converged)
}

/// Bounded Nelder-Mead in the (u, z) plane. Out-of-box trial points are
/// projected back onto the box. The starting grid winner is a vertex, and
/// vertices are only ever replaced by better ones, so the refined optimum
/// never exceeds the grid optimum.
fn refine_2d(
    obj: &mut Objective,
    u_bounds: Interval,
    z_bounds: Interval,
    start: (f64, f64, f64),
    steps: (f64, f64),
    budget: usize,
) -> (f64, f64, f64, bool) {
    let (u0, z0, f0) = start;
    let du = signed_step(u0, steps.0, u_bounds);
    let dz = signed_step(z0, steps.1, z_bounds);

    let clamp = |x: [f64; 2]| [u_bounds.clamp(x[0]), z_bounds.clamp(x[1])];
    let mut spent = 0usize;
    let eval = |x: [f64; 2], obj: &mut Objective, spent: &mut usize| {
        *spent += 1;
        obj.eval(x[0], x[1])
    };

    let mut simplex: Vec<([f64; 2], f64)> = vec![([u0, z0], f0)];
    for x in [clamp([u0 + du, z0]), clamp([u0, z0 + dz])] {
        if spent >= budget {
            return (u0, z0, f0, false);
        }
        let fx = eval(x, obj, &mut spent);
        simplex.push((x, fx));
    }

    let mut converged = false;
    for _ in 0..NM_MAX_ITER {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread_f = simplex[2].1 - simplex[0].1;
        let spread_x = (0..2)
            .map(|i| {
                let coords = [simplex[0].0[i], simplex[1].0[i], simplex[2].0[i]];
                let max = coords.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
                let min = coords.iter().fold(f64::INFINITY, |a, &b| a.min(b));
                max - min
            })
            .fold(0.0, f64::max);
        if spread_f <= 1e-11 * (1.0 + simplex[0].1.abs()) && spread_x <= 1e-8 {
            converged = true;
            break;
        }
        if spent + 4 > budget {
            break;
        }

        let centroid = [
            0.5 * (simplex[0].0[0] + simplex[1].0[0]),
            0.5 * (simplex[0].0[1] + simplex[1].0[1]),
        ];
        let worst = simplex[2];
        let reflect = clamp([
            centroid[0] + (centroid[0] - worst.0[0]),
            centroid[1] + (centroid[1] - worst.0[1]),
        ]);
        let f_reflect = eval(reflect, obj, &mut spent);

        if f_reflect < simplex[0].1 {
            let expand = clamp([
                centroid[0] + 2.0 * (centroid[0] - worst.0[0]),
                centroid[1] + 2.0 * (centroid[1] - worst.0[1]),
            ]);
            let f_expand = eval(expand, obj, &mut spent);
            simplex[2] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < simplex[1].1 {
            simplex[2] = (reflect, f_reflect);
        } else {
            let (contract_base, f_base) = if f_reflect < worst.1 {
                (reflect, f_reflect)
            } else {
                (worst.0, worst.1)
            };
            let contract = clamp([
                centroid[0] + 0.5 * (contract_base[0] - centroid[0]),
                centroid[1] + 0.5 * (contract_base[1] - centroid[1]),
            ]);
            let f_contract = eval(contract, obj, &mut spent);
            if f_contract < f_base {
                simplex[2] = (contract, f_contract);
            } else {
                for i in 1..3 {
                    let shrunk = clamp([
                        simplex[0].0[0] + 0.5 * (simplex[i].0[0] - simplex[0].0[0]),
                        simplex[0].0[1] + 0.5 * (simplex[i].0[1] - simplex[0].0[1]),
                    ]);
                    let f_shrunk = eval(shrunk, obj, &mut spent);
                    simplex[i] = (shrunk, f_shrunk);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = simplex[0];
    (x[0], x[1], f, converged)
}

/// Initial simplex step away from the nearest boundary.
fn signed_step(x0: f64, step: f64, bounds: Interval) -> f64 {
    let step = step.max(1e-6 * (1.0 + x0.abs())).min(bounds.width() / 2.0);
    if x0 + step <= bounds.hi {
        step
    } else {
        -step
    }
}

/// Which instrument knob a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepAxis {
    DcBias,
    AcAmplitude,
}

/// A sweep of one drive knob with everything else held fixed.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    /// First abscissa in volts.
    pub start: f64,
    /// Last abscissa in volts.
    pub stop: f64,
    pub points: usize,
    pub junction: JunctionParams,
    pub drive: DriveParams,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        self.junction.validate()?;
        self.drive.validate()?;
        if self.points == 0 {
            return Err(Error::invalid("points", "must be at least 1"));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::invalid(
                "start",
                format!(
                    "sweep range must be finite, got [{}, {}]",
                    self.start, self.stop
                ),
            ));
        }
        if self.axis == SweepAxis::AcAmplitude && self.start.min(self.stop) < 0.0 {
            return Err(Error::invalid(
                "start",
                "ac amplitude sweep cannot include negative amplitudes",
            ));
        }
        Ok(())
    }

    fn abscissa(&self, i: usize) -> f64 {
        if self.points == 1 {
            return self.start;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.points - 1) as f64
    }
}

/// Evaluate the quadrature decomposition along the sweep. Rows come back in
/// abscissa order; evaluation is parallel but the output is deterministic.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<(f64, NoiseResult)>> {
    spec.validate()?;
    let rows: Vec<(f64, NoiseResult)> = (0..spec.points)
        .into_par_iter()
        .map(|i| {
            let v = spec.abscissa(i);
            let mut drive = spec.drive;
            match spec.axis {
                SweepAxis::DcBias => drive.dc_bias = v,
                SweepAxis::AcAmplitude => drive.ac_amplitude = v,
            }
            let point = to_reduced(&spec.junction, &drive).expect("sweep params validated");
            (v, quadrature_variances(point))
        })
        .collect();
    Ok(rows)
}

/// Undriven reference curve `S(u)` for the same junction, one value per
/// sweep abscissa interpreted as dc bias.
pub fn undriven_reference(spec: &SweepSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut zero_drive = spec.drive;
    zero_drive.ac_amplitude = 0.0;
    Ok((0..spec.points)
        .map(|i| {
            let mut drive = zero_drive;
            if spec.axis == SweepAxis::DcBias {
                drive.dc_bias = spec.abscissa(i);
            }
            let point = to_reduced(&spec.junction, &drive).expect("sweep params validated");
            s_finite_freq(point.u, point.theta_t)
        })
        .collect())
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // oracle literals are recorded in full
mod tests {
    use super::*;

    const THETA_28MK_7G2: f64 = 0.08103129659071833936976;
    const Z_46UV_P1: f64 = 0.7724132301104599684928;

    fn default_u() -> Interval {
        Interval { lo: -4.0, hi: 4.0 }
    }

    fn default_z() -> Interval {
        Interval { lo: 0.0, hi: 4.0 }
    }

    #[test]
    fn zero_temperature_p1_optimum() {
        let opt = optimize_squeeze(0.0, Harmonic::P1, default_u(), default_z()).unwrap();
        assert!(
            (opt.ratio - 0.6183434637610405).abs() < 1e-5,
            "ratio {}",
            opt.ratio
        );
        assert!((opt.u_star - 1.0).abs() < 1e-3, "u* = {}", opt.u_star);
        assert!(
            (opt.z_star - 0.7056242310829957).abs() < 1e-3,
            "z* = {}",
            opt.z_star
        );
        assert!((opt.db - -2.0877022558884666).abs() < 1e-4);
        assert!(opt.converged);
        assert!(opt.evaluations <= MAX_EVALUATIONS);
    }

    #[test]
    fn zero_temperature_p2_optimum() {
        let opt = optimize_squeeze(0.0, Harmonic::P2, default_u(), default_z()).unwrap();
        assert!(
            (opt.ratio - 0.7304432881231859).abs() < 1e-5,
            "ratio {}",
            opt.ratio
        );
        assert!(opt.u_star.abs() < 1e-3, "u* = {}", opt.u_star);
        assert!(
            (opt.z_star - 1.5826133500088888).abs() < 1e-3,
            "z* = {}",
            opt.z_star
        );
        assert!((opt.db - -1.3641349719889946).abs() < 1e-4);
    }

    #[test]
    fn refinement_never_regresses_from_grid() {
        for (theta, p) in [(0.0, Harmonic::P1), (0.0388, Harmonic::P2)] {
            let opt = optimize_squeeze(theta, p, default_u(), default_z()).unwrap();
            let mut grid_best = f64::INFINITY;
            for i in 0..GRID_POINTS {
                let u = -4.0 + 8.0 * i as f64 / (GRID_POINTS - 1) as f64;
                for j in 0..GRID_POINTS {
                    let z = 4.0 * j as f64 / (GRID_POINTS - 1) as f64;
                    grid_best = grid_best.min(ratio_at(u, z, theta, p));
                }
            }
            assert!(
                opt.ratio <= grid_best,
                "refined {} vs grid {}",
                opt.ratio,
                grid_best
            );
        }
    }

    #[test]
    fn degenerate_drive_axis_reports_no_squeezing() {
        let opt = optimize_squeeze(
            0.0,
            Harmonic::P1,
            default_u(),
            Interval { lo: 0.0, hi: 0.0 },
        )
        .unwrap();
        assert_eq!(opt.ratio, 1.0);
        assert_eq!(opt.u_star, 0.0);
        assert_eq!(opt.z_star, 0.0);
    }

    #[test]
    fn fully_degenerate_box_matches_direct_evaluation() {
        let opt = optimize_squeeze(
            0.0,
            Harmonic::P1,
            Interval { lo: 1.0, hi: 1.0 },
            Interval { lo: 0.77, hi: 0.77 },
        )
        .unwrap();
        let direct = ratio_at(1.0, 0.77, 0.0, Harmonic::P1);
        assert_eq!(opt.ratio, direct);
        assert!(opt.converged);
    }

    #[test]
    fn bias_scan_at_experimental_drive() {
        let opt =
            optimize_bias_at_fixed_drive(Z_46UV_P1, THETA_28MK_7G2, Harmonic::P1, default_u())
                .unwrap();
        assert!((opt.ratio - 0.74075).abs() < 2e-3, "ratio {}", opt.ratio);
        assert!(opt.u_star > 0.0, "tie-break should prefer positive bias");
        assert!((opt.u_star - 0.976).abs() < 5e-3, "u* = {}", opt.u_star);
        assert_eq!(opt.z_star, Z_46UV_P1);
    }

    #[test]
    fn bias_scan_without_drive_is_flat_at_vacuum() {
        let opt = optimize_bias_at_fixed_drive(0.0, 0.0, Harmonic::P1, default_u()).unwrap();
        assert_eq!(opt.ratio, 1.0);
        assert_eq!(opt.u_star, 0.0);
    }

    #[test]
    fn symmetric_ties_prefer_positive_bias() {
        let opt = optimize_bias_at_fixed_drive(0.77, 0.0, Harmonic::P1, default_u()).unwrap();
        assert!(opt.u_star > 0.0, "u* = {}", opt.u_star);
    }

    #[test]
    fn rejects_invalid_search_domains() {
        assert!(optimize_squeeze(-0.1, Harmonic::P1, default_u(), default_z()).is_err());
        assert!(optimize_squeeze(
            0.0,
            Harmonic::P1,
            Interval { lo: 2.0, hi: 1.0 },
            default_z()
        )
        .is_err());
        assert!(optimize_squeeze(
            0.0,
            Harmonic::P1,
            default_u(),
            Interval { lo: -0.5, hi: 1.0 }
        )
        .is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(optimize_bias_at_fixed_drive(-0.1, 0.0, Harmonic::P1, default_u()).is_err());
    }

    fn experiment_sweep(points: usize) -> SweepSpec {
        SweepSpec {
            axis: SweepAxis::DcBias,
            start: -120e-6,
            stop: 120e-6,
            points,
            junction: JunctionParams {
                resistance: 70.0,
                electron_temperature: 0.028,
            },
            drive: DriveParams {
                measurement_frequency: 7.2e9,
                harmonic: Harmonic::P1,
                dc_bias: 0.0,
                ac_amplitude: 46e-6,
                quadrature_phase: 0.0,
            },
        }
    }

    #[test]
    fn sweep_grid_is_uniform_and_ordered() {
        let spec = experiment_sweep(25);
        let rows = sweep(&spec).unwrap();
        assert_eq!(rows.len(), 25);
        assert_eq!(rows[0].0, -120e-6);
        assert_eq!(rows[24].0, 120e-6);
        let step = rows[1].0 - rows[0].0;
        for w in rows.windows(2) {
            assert!((w[1].0 - w[0].0 - step).abs() < 1e-18);
        }
    }

    #[test]
    fn sweep_is_deterministic_across_runs() {
        let spec = experiment_sweep(101);
        let a = sweep(&spec).unwrap();
        let b = sweep(&spec).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            assert_eq!(ra.0, rb.0);
            assert_eq!(ra.1.s_tilde, rb.1.s_tilde);
            assert_eq!(ra.1.x_corr, rb.1.x_corr);
        }
    }

    #[test]
    fn zero_drive_sweep_has_degenerate_quadratures() {
        let mut spec = experiment_sweep(51);
        spec.drive.ac_amplitude = 0.0;
        let rows = sweep(&spec).unwrap();
        for (_, r) in rows {
            assert_eq!(r.var_a, r.var_b);
            assert_eq!(r.x_corr, 0.0);
        }
    }

    #[test]
    fn undriven_reference_matches_zero_drive_sweep() {
        let spec = experiment_sweep(31);
        let reference = undriven_reference(&spec).unwrap();
        let mut zero = spec.clone();
        zero.drive.ac_amplitude = 0.0;
        let rows = sweep(&zero).unwrap();
        for (s, (_, r)) in reference.iter().zip(&rows) {
            assert_eq!(*s, r.s_tilde);
        }
    }

    #[test]
    fn sweep_rejects_bad_specs() {
        let mut spec = experiment_sweep(0);
        assert!(sweep(&spec).is_err());
        spec.points = 10;
        spec.axis = SweepAxis::AcAmplitude;
        spec.start = -1e-6;
        assert!(sweep(&spec).is_err());
    }
}
