use serde_json::json;

use squeeze_core::noise::{vacuum_noise, NoiseResult};
use squeeze_core::optimize::{sweep, undriven_reference, SweepAxis, SweepSpec};

use crate::args::{AxisArg, FormatArg, SweepArgs};
use crate::config::{pick, resolve_physical, ConfigMap, Physical};
use crate::error::CliError;
use crate::io::{fmt_f64, to_json_string, write_text, SweepTable};

pub const SWEEP_HEADER: &str = "abscissa[V],S[hw/R],S_tilde[hw/R],var_A[hw/R],var_B[hw/R],\
min_quadrature[hw/R],squeeze_ratio[1],squeeze_db[dB],vacuum_reference[hw/R]";

fn axis_name(axis: SweepAxis) -> &'static str {
    match axis {
        SweepAxis::DcBias => "dc-bias",
        SweepAxis::AcAmplitude => "ac-amplitude",
    }
}

/// Run the sweep behind `spec` and lay it out as a self-describing table:
/// a comment block with the full resolved configuration, the column
/// header, and one row per abscissa. `min_uv`/`max_uv` are the sweep
/// bounds exactly as configured, to echo them without unit-conversion
/// rounding.
pub fn build_table(
    label: &str,
    spec: &SweepSpec,
    phys: &Physical,
    min_uv: f64,
    max_uv: f64,
) -> Result<SweepTable, CliError> {
    let rows = sweep(spec)?;
    let undriven = undriven_reference(spec)?;
    let vacuum = vacuum_noise(phys.theta_t());

    let preamble = vec![
        format!("# {label}"),
        format!("# axis={}", axis_name(spec.axis)),
        format!("# min_uv={}", fmt_f64(min_uv)),
        format!("# max_uv={}", fmt_f64(max_uv)),
        format!("# points={}", spec.points),
        format!("# vdc_uv={}", fmt_f64(phys.vdc_uv)),
        format!("# vac_uv={}", fmt_f64(phys.vac_uv)),
        format!("# freq_ghz={}", fmt_f64(phys.freq_ghz)),
        format!("# temp_mk={}", fmt_f64(phys.temp_mk)),
        format!("# resistance_ohm={}", fmt_f64(phys.resistance_ohm)),
        format!("# p={}", phys.p.index()),
        format!("# phase_deg={}", fmt_f64(phys.phase_deg)),
        format!("# theta_t={}", fmt_f64(phys.theta_t())),
        format!("# vacuum_reference={}", fmt_f64(vacuum)),
    ];

    let rows = rows
        .iter()
        .zip(&undriven)
        .map(|(&(abscissa, r), &s)| {
            vec![
                abscissa,
                s,
                r.s_tilde,
                r.var_a,
                r.var_b,
                r.min_quadrature,
                r.squeeze_ratio,
                r.squeeze_db,
                vacuum,
            ]
        })
        .collect();

    Ok(SweepTable {
        preamble,
        header: SWEEP_HEADER.to_string(),
        rows,
    })
}

fn row_json(abscissa: f64, s: f64, r: &NoiseResult) -> serde_json::Value {
    json!({
        "abscissa_v": abscissa,
        "s": s,
        "s_tilde": r.s_tilde,
        "var_a": r.var_a,
        "var_b": r.var_b,
        "min_quadrature": r.min_quadrature,
        "squeeze_ratio": r.squeeze_ratio,
        "squeeze_db": r.squeeze_db,
    })
}

pub fn run(args: &SweepArgs) -> Result<(), CliError> {
    let cfg = ConfigMap::load(args.phys.config.as_deref())?;
    let phys = resolve_physical(&args.phys, &cfg)?;
    let axis = pick(args.axis, cfg.axis()?, AxisArg::DcBias);
    let min_uv = pick(args.min_uv, cfg.f64("min_uv")?, -120.0);
    let max_uv = pick(args.max_uv, cfg.f64("max_uv")?, 120.0);
    let points = pick(args.points, cfg.usize("points")?, 241);
    let format = pick(args.format, cfg.format()?, FormatArg::Csv);
    let output = args.output.clone().or_else(|| cfg.path("output"));

    let spec = SweepSpec {
        axis: match axis {
            AxisArg::DcBias => SweepAxis::DcBias,
            AxisArg::AcAmplitude => SweepAxis::AcAmplitude,
        },
        start: min_uv * 1e-6,
        stop: max_uv * 1e-6,
        points,
        junction: phys.junction,
        drive: phys.drive,
    };

    let text = match format {
        FormatArg::Csv => build_table("squeeze sweep", &spec, &phys, min_uv, max_uv)?.render(),
        FormatArg::Json => {
            let rows = sweep(&spec)?;
            let undriven = undriven_reference(&spec)?;
            let vacuum = vacuum_noise(phys.theta_t());
            let row_values: Vec<serde_json::Value> = rows
                .iter()
                .zip(&undriven)
                .map(|(&(abscissa, r), &s)| row_json(abscissa, s, &r))
                .collect();
            to_json_string(&json!({
                "command": "sweep",
                "config": {
                    "axis": axis_name(spec.axis),
                    "min_uv": min_uv,
                    "max_uv": max_uv,
                    "points": points,
                    "vdc_uv": phys.vdc_uv,
                    "vac_uv": phys.vac_uv,
                    "freq_ghz": phys.freq_ghz,
                    "temp_mk": phys.temp_mk,
                    "resistance_ohm": phys.resistance_ohm,
                    "p": phys.p.index(),
                    "phase_deg": phys.phase_deg,
                    "theta_t": phys.theta_t(),
                },
                "vacuum_reference": vacuum,
                "rows": row_values,
            }))?
        }
    };
    write_text(output.as_deref(), &text)
}
