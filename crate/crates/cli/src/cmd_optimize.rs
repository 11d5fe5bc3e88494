use serde_json::json;

use squeeze_core::constants::{BOLTZMANN, ELEMENTARY_CHARGE, PLANCK};
use squeeze_core::optimize::{optimize_squeeze, Interval, SqueezeOptimum};

use crate::args::OptimizeArgs;
use crate::config::{pick, resolve_physical, ConfigMap};
use crate::error::CliError;
use crate::io::{to_json_string, write_text};

/// Reduced temperature, resolved in priority order: the --theta-t flag, the
/// --temp-mk flag, then the same two config keys, then temperature zero.
/// The frequency only matters when converting from kelvin.
fn resolve_theta(args: &OptimizeArgs, cfg: &ConfigMap, freq_hz: f64) -> Result<f64, CliError> {
    let kelvin_to_theta = |temp_mk: f64| BOLTZMANN * temp_mk * 1e-3 / (PLANCK * freq_hz);
    if let Some(theta) = args.theta_t {
        return Ok(theta);
    }
    if let Some(temp_mk) = args.phys.temp_mk {
        return Ok(kelvin_to_theta(temp_mk));
    }
    if cfg.has("theta_t") && cfg.has("temp_mk") {
        return Err(CliError::Usage(
            "config sets both theta_t and temp_mk; keep one".to_string(),
        ));
    }
    if let Some(theta) = cfg.f64("theta_t")? {
        return Ok(theta);
    }
    Ok(kelvin_to_theta(cfg.f64("temp_mk")?.unwrap_or(0.0)))
}

pub(crate) fn optimum_json(opt: &SqueezeOptimum) -> serde_json::Value {
    json!({
        "u_star": opt.u_star,
        "z_star": opt.z_star,
        "ratio": opt.ratio,
        "db": opt.db,
        "evaluations": opt.evaluations,
        "converged": opt.converged,
    })
}

pub fn run(args: &OptimizeArgs) -> Result<(), CliError> {
    let cfg = ConfigMap::load(args.phys.config.as_deref())?;
    let phys = resolve_physical(&args.phys, &cfg)?;
    let theta = resolve_theta(args, &cfg, phys.drive.measurement_frequency)?;
    let u_min = pick(args.u_min, cfg.f64("u_min")?, -4.0);
    let u_max = pick(args.u_max, cfg.f64("u_max")?, 4.0);
    let z_min = pick(args.z_min, cfg.f64("z_min")?, 0.0);
    let z_max = pick(args.z_max, cfg.f64("z_max")?, 4.0);
    let output = args.output.clone().or_else(|| cfg.path("output"));

    let u_bounds = Interval::new(u_min, u_max)?;
    let z_bounds = Interval::new(z_min, z_max)?;
    let opt = optimize_squeeze(theta, phys.p, u_bounds, z_bounds)?;

    let photon = PLANCK * phys.drive.measurement_frequency;
    let drive_freq_hz = phys.p.drive_frequency(phys.drive.measurement_frequency);
    let drive_photon = PLANCK * drive_freq_hz;
    let report = json!({
        "command": "optimize",
        "spec": {
            "theta_t": theta,
            "p": phys.p.index(),
            "u_min": u_min,
            "u_max": u_max,
            "z_min": z_min,
            "z_max": z_max,
        },
        "context": {
            "freq_ghz": phys.freq_ghz,
            "drive_freq_ghz": drive_freq_hz * 1e-9,
            "temp_mk": theta * photon / BOLTZMANN * 1e3,
            "resistance_ohm": phys.resistance_ohm,
        },
        "optimum": optimum_json(&opt),
        "lab_units": {
            "vdc_uv": opt.u_star * photon / ELEMENTARY_CHARGE * 1e6,
            "vac_uv": opt.z_star * drive_photon / ELEMENTARY_CHARGE * 1e6,
        },
    });
    write_text(output.as_deref(), &to_json_string(&report)?)
}
