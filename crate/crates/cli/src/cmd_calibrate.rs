use std::path::Path;

use serde_json::json;

use squeeze_core::calibrate::{fit_drive_amplitude, fit_undriven, CalibrationFit, NoiseCurve};

use crate::args::CalibrateArgs;
use crate::config::ConfigMap;
use crate::error::CliError;
use crate::io::{read_curve_csv, read_to_string, to_json_string, write_text};

/// Load a prior calibration from JSON: either a bare CalibrationFit object
/// or a full calibrate report wrapping it under "fit".
fn load_fixed(path: &Path) -> Result<CalibrationFit, CliError> {
    let text = read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{} is not valid JSON: {e}", path.display())))?;
    let fit_value = value.get("fit").cloned().unwrap_or(value);
    serde_json::from_value(fit_value).map_err(|e| {
        CliError::Usage(format!(
            "{} does not hold a calibration fit: {e}",
            path.display()
        ))
    })
}

pub fn run(args: &CalibrateArgs) -> Result<(), CliError> {
    let cfg = ConfigMap::load(args.phys.config.as_deref())?;
    let (meta, points) = read_curve_csv(&args.input)?;

    // Measurement frequency and resistance: flags beat the config file,
    // which beats the curve's own metadata.
    let frequency = args
        .phys
        .freq_ghz
        .or(cfg.f64("freq_ghz")?)
        .map(|ghz| ghz * 1e9)
        .or(meta.frequency_hz)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "{}: no measurement frequency; add '# frequency_hz=...' to the file or pass --freq-ghz",
                args.input.display()
            ))
        })?;
    let resistance = args
        .phys
        .resistance_ohm
        .or(cfg.f64("resistance_ohm")?)
        .or(meta.resistance_ohm)
        .unwrap_or(50.0);

    let curve = NoiseCurve {
        frequency,
        resistance,
        points,
    };
    let output = args.output.clone().or_else(|| cfg.path("output"));

    let report = if args.driven {
        // clap enforces that --driven brings --fixed and --drive-freq-ghz.
        let fixed = load_fixed(args.fixed.as_deref().expect("required by clap"))?;
        let drive_freq_hz = args.drive_freq_ghz.expect("required by clap") * 1e9;
        let fit = fit_drive_amplitude(&curve, &fixed, drive_freq_hz)?;
        json!({
            "command": "calibrate",
            "mode": "driven",
            "input": args.input.display().to_string(),
            "drive_freq_ghz": drive_freq_hz * 1e-9,
            "fit": fit,
        })
    } else {
        let fit = fit_undriven(&curve, None)?;
        json!({
            "command": "calibrate",
            "mode": "undriven",
            "input": args.input.display().to_string(),
            "fit": fit,
        })
    };
    write_text(output.as_deref(), &to_json_string(&report)?)
}
