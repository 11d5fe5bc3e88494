use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "squeeze",
    version,
    about = "Quadrature shot noise and squeezing of an ac-driven tunnel junction",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep dc bias or ac amplitude and tabulate the noise decomposition.
    Sweep(SweepArgs),
    /// Search for the deepest squeezing over bias and drive strength.
    Optimize(OptimizeArgs),
    /// Fit amplifier calibration or drive amplitude to a noise curve.
    Calibrate(CalibrateArgs),
    /// Re-run canned reference configurations and check headline numbers.
    Reproduce(ReproduceArgs),
}

/// Junction and drive parameters shared by the computing subcommands.
/// Every value may also come from the `--config` file; flags win.
#[derive(Debug, Args)]
pub struct PhysicalArgs {
    /// Flat key=value parameter file; command-line flags override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Dc bias in microvolts [default: 0].
    #[arg(long, value_name = "UV", allow_hyphen_values = true)]
    pub vdc_uv: Option<f64>,

    /// Ac drive amplitude in microvolts [default: 0].
    #[arg(long, value_name = "UV")]
    pub vac_uv: Option<f64>,

    /// Measurement frequency in gigahertz [default: 7.2].
    #[arg(long, value_name = "GHZ")]
    pub freq_ghz: Option<f64>,

    /// Electron temperature in millikelvin [default: 0].
    #[arg(long, value_name = "MK")]
    pub temp_mk: Option<f64>,

    /// Junction resistance in ohms; only validated, never enters the
    /// reduced-unit results [default: 50].
    #[arg(long, value_name = "OHM")]
    pub resistance_ohm: Option<f64>,

    /// Harmonic order p: the drive runs at 2f/p [default: 1].
    #[arg(long, value_name = "1|2")]
    pub p: Option<i32>,

    /// Quadrature phase in degrees [default: 0].
    #[arg(long, value_name = "DEG")]
    pub phase_deg: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    /// Sweep the dc bias, holding the ac amplitude fixed.
    DcBias,
    /// Sweep the ac amplitude, holding the dc bias fixed.
    AcAmplitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub phys: PhysicalArgs,

    /// Which knob to sweep [default: dc-bias].
    #[arg(long, value_enum, value_name = "AXIS")]
    pub axis: Option<AxisArg>,

    /// Sweep start in microvolts [default: -120].
    #[arg(long, value_name = "UV", allow_hyphen_values = true)]
    pub min_uv: Option<f64>,

    /// Sweep end in microvolts [default: 120].
    #[arg(long, value_name = "UV", allow_hyphen_values = true)]
    pub max_uv: Option<f64>,

    /// Number of sweep points [default: 241].
    #[arg(long, value_name = "N")]
    pub points: Option<usize>,

    /// Output file [default: standard output].
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Output format [default: csv].
    #[arg(long, value_enum, value_name = "FMT")]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub phys: PhysicalArgs,

    /// Reduced temperature k_B T / hf; overrides --temp-mk.
    #[arg(long, value_name = "THETA", conflicts_with = "temp_mk")]
    pub theta_t: Option<f64>,

    /// Lower dc-bias bound in reduced units [default: -4].
    #[arg(long, value_name = "U", allow_hyphen_values = true)]
    pub u_min: Option<f64>,

    /// Upper dc-bias bound in reduced units [default: 4].
    #[arg(long, value_name = "U", allow_hyphen_values = true)]
    pub u_max: Option<f64>,

    /// Lower drive-strength bound in reduced units [default: 0].
    #[arg(long, value_name = "Z")]
    pub z_min: Option<f64>,

    /// Upper drive-strength bound in reduced units [default: 4].
    #[arg(long, value_name = "Z")]
    pub z_max: Option<f64>,

    /// Output file [default: standard output].
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub phys: PhysicalArgs,

    /// Input noise curve (CSV with '#' key=value metadata, then a
    /// `bias_v,measured` header).
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,

    /// Fit the ac drive amplitude of a driven curve instead of the
    /// undriven (gain, amplifier noise, temperature) triple.
    #[arg(long, requires_all = ["fixed", "drive_freq_ghz"])]
    pub driven: bool,

    /// Prior calibration JSON (an undriven fit report) holding the fixed
    /// gain, amplifier noise, and temperature for a driven fit.
    #[arg(long, value_name = "PATH", requires = "driven")]
    pub fixed: Option<PathBuf>,

    /// Ac drive frequency in gigahertz for a driven fit; must equal
    /// 2f/p for the curve's measurement frequency f and p in {1, 2}.
    #[arg(long, value_name = "GHZ", requires = "driven")]
    pub drive_freq_ghz: Option<f64>,

    /// Output file for the fit report [default: standard output].
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Driven p=1 bias sweep at 28 mK, 46 uV: minimum ratio near 0.74.
    #[value(alias = "fig_2")]
    Fig2,
    /// Driven p=2 bias sweep at reduced temperature 0.0388, 36 uV:
    /// minimum ratio near 0.82 at zero bias.
    #[value(alias = "fig_3")]
    Fig3,
    /// Zero-temperature optima for both harmonics: 0.62 and 0.73.
    #[value(alias = "t0_optima")]
    T0Optima,
    /// All four reference optima in one table.
    #[value(alias = "table_of_optima")]
    TableOfOptima,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Which canned configuration to run.
    #[arg(long, value_enum, value_name = "TARGET")]
    pub target: Target,

    /// Directory for the emitted data files and summary.json
    /// [default: current directory].
    #[arg(long, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,

    /// Flat key=value parameter file; only `output_dir` is honored here.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}
