//! End-to-end tests of the `squeeze` binary: spawn the real executable,
//! feed it files and flags, and check outputs, formats, and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use squeeze_cli::io::{read_sweep_csv, render_curve_csv};
use squeeze_cli::{EXIT_IO, EXIT_OK, EXIT_USAGE};
use squeeze_core::calibrate::synthesize_curve;
use squeeze_core::constants::{ELEMENTARY_CHARGE, PLANCK};
use squeeze_core::noise::{DriveParams, Harmonic, JunctionParams};

const GAIN: f64 = 1.0e7;
const AMP_NOISE: f64 = 17.36;
const TEMP_K: f64 = 0.028;
const FREQ_HZ: f64 = 7.2e9;
const RESISTANCE: f64 = 70.0;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_squeeze"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("spawn squeeze binary")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_json(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(path).expect("read JSON report");
    serde_json::from_str(&text).expect("parse JSON report")
}

fn threshold_bias() -> f64 {
    PLANCK * FREQ_HZ / ELEMENTARY_CHARGE
}

fn bias_grid(n: usize) -> Vec<f64> {
    let span = 4.0 * threshold_bias();
    (0..n)
        .map(|i| -span + 2.0 * span * i as f64 / (n - 1) as f64)
        .collect()
}

/// Synthesize a noiseless curve and write it in the CLI's CSV format.
fn write_curve(path: &Path, ac_amplitude: f64, points: usize) {
    let junction = JunctionParams {
        resistance: RESISTANCE,
        electron_temperature: TEMP_K,
    };
    let drive = DriveParams {
        measurement_frequency: FREQ_HZ,
        harmonic: Harmonic::P1,
        dc_bias: 0.0,
        ac_amplitude,
        quadrature_phase: 0.0,
    };
    let curve = synthesize_curve(
        &junction,
        &drive,
        GAIN,
        AMP_NOISE,
        &bias_grid(points),
        0.0,
        0,
    )
    .expect("synthesize curve");
    std::fs::write(path, render_curve_csv(FREQ_HZ, RESISTANCE, &curve.points))
        .expect("write curve CSV");
}

fn rel_err(measured: f64, truth: f64) -> f64 {
    (measured - truth).abs() / truth.abs()
}

#[test]
fn zero_drive_sweep_has_identical_quadratures() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sweep.csv");
    let out = run(bin()
        .args([
            "sweep",
            "--vac-uv",
            "0",
            "--temp-mk",
            "35",
            "--points",
            "41",
        ])
        .args(["--output", out_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_OK);

    let table = read_sweep_csv(&out_path).unwrap();
    assert_eq!(
        table.header,
        "abscissa[V],S[hw/R],S_tilde[hw/R],var_A[hw/R],var_B[hw/R],\
         min_quadrature[hw/R],squeeze_ratio[1],squeeze_db[dB],vacuum_reference[hw/R]"
            .replace("         ", "")
    );
    assert_eq!(table.rows.len(), 41);
    for row in &table.rows {
        assert_eq!(row[3], row[4], "var_A != var_B in a zero-drive sweep");
        assert_eq!(row[1], row[2], "S != S_tilde in a zero-drive sweep");
    }
}

#[test]
fn sweep_csv_round_trips_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sweep.csv");
    let out = run(bin()
        .args(["sweep", "--vac-uv", "46", "--temp-mk", "28", "--p", "1"])
        .args(["--resistance-ohm", "70", "--points", "101"])
        .args(["--output", out_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_OK);

    let original = std::fs::read(&out_path).unwrap();
    let reemitted = read_sweep_csv(&out_path).unwrap().render();
    assert_eq!(original, reemitted.into_bytes());
}

#[test]
fn sweep_output_is_thread_count_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let auto_path = dir.path().join("auto.csv");
    let single_path = dir.path().join("single.csv");
    let args = [
        "sweep",
        "--vac-uv",
        "36",
        "--temp-mk",
        "28",
        "--p",
        "2",
        "--points",
        "257",
    ];
    let out = run(bin()
        .args(args)
        .args(["--output", auto_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_OK);
    let out = run(bin()
        .args(args)
        .args(["--output", single_path.to_str().unwrap()])
        .env("SQUEEZE_THREADS", "1"));
    assert_exit(&out, EXIT_OK);
    assert_eq!(
        std::fs::read(&auto_path).unwrap(),
        std::fs::read(&single_path).unwrap()
    );
}

#[test]
fn undriven_calibration_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let curve_path = dir.path().join("curve.csv");
    let fit_path = dir.path().join("fit.json");
    write_curve(&curve_path, 0.0, 201);

    let out = run(bin()
        .args(["calibrate", "--input", curve_path.to_str().unwrap()])
        .args(["--output", fit_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_OK);

    let report = read_json(&fit_path);
    assert_eq!(report["command"], "calibrate");
    assert_eq!(report["mode"], "undriven");
    let fit = &report["fit"];
    assert!(rel_err(fit["gain"].as_f64().unwrap(), GAIN) < 1e-6);
    assert!(rel_err(fit["amp_noise"].as_f64().unwrap(), AMP_NOISE) < 1e-6);
    assert!(rel_err(fit["temperature"].as_f64().unwrap(), TEMP_K) < 1e-6);
    assert!(fit["v_ac"].is_null());
}

#[test]
fn driven_calibration_recovers_drive_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    let undriven_path = dir.path().join("undriven.csv");
    let driven_path = dir.path().join("driven.csv");
    let fit_path = dir.path().join("fit.json");
    let vac_path = dir.path().join("vac.json");
    write_curve(&undriven_path, 0.0, 201);
    write_curve(&driven_path, 46e-6, 161);

    let out = run(bin()
        .args(["calibrate", "--input", undriven_path.to_str().unwrap()])
        .args(["--output", fit_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_OK);

    let out = run(bin()
        .args(["calibrate", "--input", driven_path.to_str().unwrap()])
        .args(["--driven", "--fixed", fit_path.to_str().unwrap()])
        .args(["--drive-freq-ghz", "14.4"])
        .args(["--output", vac_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_OK);

    let report = read_json(&vac_path);
    assert_eq!(report["mode"], "driven");
    let v_ac = report["fit"]["v_ac"].as_f64().unwrap();
    assert!(
        rel_err(v_ac, 46e-6) < 5e-3,
        "recovered V_ac = {v_ac}, want 46e-6 within 0.5%"
    );
}

#[test]
fn five_point_curve_exits_with_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let curve_path = dir.path().join("short.csv");
    write_curve(&curve_path, 0.0, 5);

    let out = run(bin().args(["calibrate", "--input", curve_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_USAGE);
}

#[test]
fn malformed_curve_row_reports_its_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let curve_path = dir.path().join("bad.csv");
    let mut text = String::from("# frequency_hz=7.2e9\nbias_v,measured\n");
    for i in 0..4 {
        text.push_str(&format!("{}e-5,1e8\n", i - 2));
    }
    text.push_str("not-a-number,oops\n"); // line 7
    std::fs::write(&curve_path, text).unwrap();

    let out = run(bin().args(["calibrate", "--input", curve_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_USAGE);
    assert!(
        stderr_of(&out).contains("line 7"),
        "stderr should name line 7: {}",
        stderr_of(&out)
    );
}

#[test]
fn curve_without_frequency_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let curve_path = dir.path().join("nofreq.csv");
    let mut text = String::from("bias_v,measured\n");
    for i in 0..12 {
        text.push_str(&format!("{}e-5,1e8\n", i - 6));
    }
    std::fs::write(&curve_path, text).unwrap();

    let out = run(bin().args(["calibrate", "--input", curve_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_USAGE);
    assert!(stderr_of(&out).contains("frequency"));
}

#[test]
fn optimize_reports_the_zero_temperature_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("opt.json");
    let out = run(bin()
        .args(["optimize", "--theta-t", "0", "--p", "1"])
        .args(["--output", report_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_OK);

    let report = read_json(&report_path);
    let opt = &report["optimum"];
    assert!(opt["converged"].as_bool().unwrap());
    assert!((opt["ratio"].as_f64().unwrap() - 0.6183434637610405).abs() < 1e-6);
    assert!((opt["u_star"].as_f64().unwrap().abs() - 1.0).abs() < 1e-3);
    assert!((opt["z_star"].as_f64().unwrap() - 0.7056242310829957).abs() < 1e-3);
    // Reduced optimum converted to lab units at the default 7.2 GHz.
    let vdc_uv = report["lab_units"]["vdc_uv"].as_f64().unwrap();
    assert!((vdc_uv.abs() - 29.7768).abs() < 0.01, "vdc_uv = {vdc_uv}");
}

#[test]
fn optimize_with_degenerate_z_bounds_reports_no_squeezing() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("opt.json");
    let out = run(bin()
        .args(["optimize", "--theta-t", "0", "--p", "1"])
        .args(["--z-min", "0", "--z-max", "0"])
        .args(["--output", report_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_OK);

    let report = read_json(&report_path);
    assert_eq!(report["optimum"]["ratio"].as_f64().unwrap(), 1.0);
    assert_eq!(report["optimum"]["z_star"].as_f64().unwrap(), 0.0);
}

#[test]
fn conflicting_temperature_flags_exit_with_usage_failure() {
    let out = run(bin().args(["optimize", "--theta-t", "0.1", "--temp-mk", "20"]));
    assert_exit(&out, EXIT_USAGE);
}

#[test]
fn reproduce_t0_optima_passes_and_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(bin()
        .args(["reproduce", "--target", "t0-optima"])
        .args(["--output-dir", dir.path().to_str().unwrap()]));
    assert_exit(&out, EXIT_OK);

    let summary = read_json(&dir.path().join("summary.json"));
    assert_eq!(summary["target"], "t0_optima");
    assert_eq!(summary["pass"], true);
    assert_eq!(summary["checks"].as_array().unwrap().len(), 4);
    assert!(dir.path().join("t0_optima.json").exists());
}

#[test]
fn reproduce_fig2_passes_and_writes_the_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(bin()
        .args(["reproduce", "--target", "fig2"])
        .args(["--output-dir", dir.path().to_str().unwrap()]));
    assert_exit(&out, EXIT_OK);

    let table = read_sweep_csv(&dir.path().join("fig2_curve.csv")).unwrap();
    assert_eq!(table.rows.len(), 481);

    let summary = read_json(&dir.path().join("summary.json"));
    assert_eq!(summary["pass"], true);
    let min_ratio = summary["checks"][0]["measured"].as_f64().unwrap();
    assert!((min_ratio - 0.7407).abs() < 3e-3, "min ratio {min_ratio}");
}

#[test]
fn config_file_supplies_parameters_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.conf");
    std::fs::write(
        &config_path,
        "# driven p=1 reference point\n\
         vac-uv = 46\n\
         temp_mk = 28\n\
         freq_ghz = 7.2\n\
         resistance_ohm = 70\n\
         p = 1\n\
         points = 9\n",
    )
    .unwrap();
    let out_path = dir.path().join("sweep.csv");
    let out = run(bin()
        .args(["sweep", "--config", config_path.to_str().unwrap()])
        .args(["--vac-uv", "0"])
        .args(["--output", out_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_OK);

    let table = read_sweep_csv(&out_path).unwrap();
    assert_eq!(table.rows.len(), 9);
    let preamble = table.preamble.join("\n");
    assert!(
        preamble.contains("# vac_uv=0.0000000000000000e0"),
        "flag should win"
    );
    assert!(preamble.contains("# temp_mk=2.8000000000000000e1"));
    assert!(preamble.contains("# resistance_ohm=7.0000000000000000e1"));
}

#[test]
fn unknown_config_key_exits_with_usage_failure() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("bad.conf");
    std::fs::write(&config_path, "junk=1\n").unwrap();

    let out = run(bin().args(["sweep", "--config", config_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_USAGE);
    assert!(stderr_of(&out).contains("unknown key"));
}

#[test]
fn unwritable_output_exits_with_io_failure() {
    let missing_parent: PathBuf = ["/definitely-not-a-real-dir-462193", "out.csv"]
        .iter()
        .collect();
    let out = run(bin()
        .args(["sweep", "--points", "3"])
        .args(["--output", missing_parent.to_str().unwrap()]));
    assert_exit(&out, EXIT_IO);
}

#[test]
fn invalid_threads_env_exits_with_usage_failure() {
    let out = run(bin()
        .args(["optimize", "--theta-t", "0"])
        .env("SQUEEZE_THREADS", "abc"));
    assert_exit(&out, EXIT_USAGE);
    assert!(stderr_of(&out).contains("SQUEEZE_THREADS"));
}

#[test]
fn narrow_span_curve_is_a_usage_failure_not_a_numerical_one() {
    // A curve whose wings stop below twice the photon threshold is
    // ill-conditioned input, not a numerical failure: exit 2, not 4.
    let dir = tempfile::tempdir().unwrap();
    let curve_path = dir.path().join("narrow.csv");
    let junction = JunctionParams {
        resistance: RESISTANCE,
        electron_temperature: TEMP_K,
    };
    let drive = DriveParams {
        measurement_frequency: FREQ_HZ,
        harmonic: Harmonic::P1,
        dc_bias: 0.0,
        ac_amplitude: 0.0,
        quadrature_phase: 0.0,
    };
    let span = 1.5 * threshold_bias();
    let biases: Vec<f64> = (0..41)
        .map(|i| -span + 2.0 * span * i as f64 / 40.0)
        .collect();
    let curve = synthesize_curve(&junction, &drive, GAIN, AMP_NOISE, &biases, 0.0, 0).unwrap();
    std::fs::write(
        &curve_path,
        render_curve_csv(FREQ_HZ, RESISTANCE, &curve.points),
    )
    .unwrap();

    let out = run(bin().args(["calibrate", "--input", curve_path.to_str().unwrap()]));
    assert_exit(&out, EXIT_USAGE);
}
