//! Flat key=value parameter files and their merge with command-line flags.
//!
//! Precedence is always: command-line flag, then config file, then the
//! built-in default. Keys use either dashes or underscores; `#` starts a
//! comment line.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use squeeze_core::constants::{BOLTZMANN, PLANCK};
use squeeze_core::noise::{DriveParams, Harmonic, JunctionParams};

use crate::args::{AxisArg, FormatArg, PhysicalArgs};
use crate::error::CliError;

/// Every key any subcommand understands. One shared file may configure
/// several subcommands; each reads only what it needs, but a typo is an
/// error everywhere.
const KNOWN_KEYS: &[&str] = &[
    "vdc_uv",
    "vac_uv",
    "freq_ghz",
    "temp_mk",
    "resistance_ohm",
    "p",
    "phase_deg",
    "axis",
    "min_uv",
    "max_uv",
    "points",
    "format",
    "output",
    "theta_t",
    "u_min",
    "u_max",
    "z_min",
    "z_max",
    "output_dir",
];

fn canonical(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

/// Parsed config file: canonical key to (line number, raw value).
#[derive(Debug, Default)]
pub struct ConfigMap {
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigMap {
    /// Load a config file, or produce an empty map when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config {} line {line_no}: expected key=value, got {line:?}",
                    path.display()
                )));
            };
            let key = canonical(key);
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config {} line {line_no}: unknown key {key:?}",
                    path.display()
                )));
            }
            if let Some((first_line, _)) = entries.get(&key) {
                return Err(CliError::Usage(format!(
                    "config {} line {line_no}: key {key:?} already set on line {first_line}",
                    path.display()
                )));
            }
            entries.insert(key, (line_no, value.trim().to_string()));
        }
        Ok(ConfigMap { entries })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| {
                    CliError::Usage(format!("config key {key:?}: {v:?} is not a number"))
                })
            })
            .transpose()
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| {
                    CliError::Usage(format!(
                        "config key {key:?}: {v:?} is not a non-negative integer"
                    ))
                })
            })
            .transpose()
    }

    pub fn i32(&self, key: &str) -> Result<Option<i32>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<i32>().map_err(|_| {
                    CliError::Usage(format!("config key {key:?}: {v:?} is not an integer"))
                })
            })
            .transpose()
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(PathBuf::from)
    }

    pub fn axis(&self) -> Result<Option<AxisArg>, CliError> {
        match self.raw("axis").map(canonical).as_deref() {
            None => Ok(None),
            Some("dc_bias") => Ok(Some(AxisArg::DcBias)),
            Some("ac_amplitude") => Ok(Some(AxisArg::AcAmplitude)),
            Some(other) => Err(CliError::Usage(format!(
                "config key \"axis\": expected dc-bias or ac-amplitude, got {other:?}"
            ))),
        }
    }

    pub fn format(&self) -> Result<Option<FormatArg>, CliError> {
        match self.raw("format").map(canonical).as_deref() {
            None => Ok(None),
            Some("csv") => Ok(Some(FormatArg::Csv)),
            Some("json") => Ok(Some(FormatArg::Json)),
            Some(other) => Err(CliError::Usage(format!(
                "config key \"format\": expected csv or json, got {other:?}"
            ))),
        }
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }
}

/// Junction and drive configuration with every unit already resolved.
#[derive(Debug, Clone, Copy)]
pub struct Physical {
    pub junction: JunctionParams,
    pub drive: DriveParams,
    pub vdc_uv: f64,
    pub vac_uv: f64,
    pub freq_ghz: f64,
    pub temp_mk: f64,
    pub resistance_ohm: f64,
    pub p: Harmonic,
    pub phase_deg: f64,
}

impl Physical {
    /// Reduced temperature k_B T / hf.
    pub fn theta_t(&self) -> f64 {
        BOLTZMANN * self.junction.electron_temperature / (PLANCK * self.drive.measurement_frequency)
    }
}

pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Merge flags, config file, and defaults into concrete parameters.
pub fn resolve_physical(args: &PhysicalArgs, cfg: &ConfigMap) -> Result<Physical, CliError> {
    let vdc_uv = pick(args.vdc_uv, cfg.f64("vdc_uv")?, 0.0);
    let vac_uv = pick(args.vac_uv, cfg.f64("vac_uv")?, 0.0);
    let freq_ghz = pick(args.freq_ghz, cfg.f64("freq_ghz")?, 7.2);
    let temp_mk = pick(args.temp_mk, cfg.f64("temp_mk")?, 0.0);
    let resistance_ohm = pick(args.resistance_ohm, cfg.f64("resistance_ohm")?, 50.0);
    let p_index = pick(args.p, cfg.i32("p")?, 1);
    let phase_deg = pick(args.phase_deg, cfg.f64("phase_deg")?, 0.0);

    let p = Harmonic::from_index(p_index)?;
    let junction = JunctionParams {
        resistance: resistance_ohm,
        electron_temperature: temp_mk * 1e-3,
    };
    let drive = DriveParams {
        measurement_frequency: freq_ghz * 1e9,
        harmonic: p,
        dc_bias: vdc_uv * 1e-6,
        ac_amplitude: vac_uv * 1e-6,
        quadrature_phase: phase_deg.to_radians(),
    };
    junction.validate()?;
    drive.validate()?;

    Ok(Physical {
        junction,
        drive,
        vdc_uv,
        vac_uv,
        freq_ghz,
        temp_mk,
        resistance_ohm,
        p,
        phase_deg,
    })
}
