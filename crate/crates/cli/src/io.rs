//! File formats: self-describing CSV tables and JSON reports.
//!
//! Every floating-point number is written with 17 significant digits
//! (`{:.16e}`), enough to reconstruct the exact double, so emitted files
//! round-trip byte-identically through read and re-emit.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use squeeze_core::calibrate::CurvePoint;

use crate::error::CliError;

/// Format one number with full double round-trip precision.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write to a file, or to standard output when no path is given.
pub fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to standard output: {e}"))),
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
    }
}

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

// --- JSON ----------------------------------------------------------------

/// Pretty JSON formatter that writes every f64 with 17 significant digits.
struct SciPretty<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for SciPretty<'_> {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_object_value(writer)
    }
}

/// Serialize a report as pretty JSON with full-precision numbers and a
/// trailing newline.
pub fn to_json_string(value: &serde_json::Value) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let formatter = SciPretty {
        inner: PrettyFormatter::new(),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, formatter);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Io(format!("JSON serialization failed: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::Io(format!("JSON output not UTF-8: {e}")))
}

// --- Sweep tables ---------------------------------------------------------

/// A sweep table: '#' preamble lines, one column-header line, numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    /// Comment lines, each starting with '#', stored without newlines.
    pub preamble: Vec<String>,
    /// The column-header line.
    pub header: String,
    /// Numeric rows; every row has as many fields as the header.
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.preamble {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.header);
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// Parse a sweep table previously emitted by this tool. Re-rendering the
/// result reproduces the file byte for byte.
pub fn read_sweep_csv(path: &Path) -> Result<SweepTable, CliError> {
    let text = read_to_string(path)?;
    let mut preamble = Vec::new();
    let mut header = None;
    let mut rows = Vec::new();
    let mut columns = 0usize;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.starts_with('#') {
            if header.is_some() {
                return Err(CliError::Usage(format!(
                    "{} line {line_no}: comment after the header is not part of the format",
                    path.display()
                )));
            }
            preamble.push(line.to_string());
            continue;
        }
        if header.is_none() {
            columns = line.split(',').count();
            header = Some(line.to_string());
            continue;
        }
        let fields: Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
        let fields = fields.map_err(|_| {
            CliError::Usage(format!(
                "{} line {line_no}: row is not comma-separated numbers: {line:?}",
                path.display()
            ))
        })?;
        if fields.len() != columns {
            return Err(CliError::Usage(format!(
                "{} line {line_no}: expected {columns} fields, got {}",
                path.display(),
                fields.len()
            )));
        }
        rows.push(fields);
    }
    let header = header
        .ok_or_else(|| CliError::Usage(format!("{}: no column header found", path.display())))?;
    Ok(SweepTable {
        preamble,
        header,
        rows,
    })
}

// --- Measured noise curves -------------------------------------------------

/// Metadata read from '#' key=value lines of a curve file.
#[derive(Debug, Default, Clone, Copy)]
pub struct CurveMeta {
    pub frequency_hz: Option<f64>,
    pub resistance_ohm: Option<f64>,
}

pub const CURVE_HEADER: &str = "bias_v,measured";

/// Parse a measured noise-versus-bias curve. Format: optional '#' comment
/// lines (a `key=value` body sets `frequency_hz` or `resistance_ohm`),
/// a `bias_v,measured` header, then two comma-separated numbers per line.
pub fn read_curve_csv(path: &Path) -> Result<(CurveMeta, Vec<CurvePoint>), CliError> {
    let text = read_to_string(path)?;
    let mut meta = CurveMeta::default();
    let mut saw_header = false;
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(body) = line.strip_prefix('#') {
            if let Some((key, value)) = body.split_once('=') {
                let key = key.trim().to_ascii_lowercase().replace('-', "_");
                let slot = match key.as_str() {
                    "frequency_hz" => &mut meta.frequency_hz,
                    "resistance_ohm" => &mut meta.resistance_ohm,
                    _ => continue, // free-form comment
                };
                let parsed = value.trim().parse::<f64>().map_err(|_| {
                    CliError::Usage(format!(
                        "{} line {line_no}: {key} value {value:?} is not a number",
                        path.display()
                    ))
                })?;
                *slot = Some(parsed);
            }
            continue;
        }
        if !saw_header {
            if line != CURVE_HEADER {
                return Err(CliError::Usage(format!(
                    "{} line {line_no}: expected header {CURVE_HEADER:?}, got {line:?}",
                    path.display()
                )));
            }
            saw_header = true;
            continue;
        }
        let mut parts = line.split(',');
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(CliError::Usage(format!(
                "{} line {line_no}: expected two comma-separated fields, got {line:?}",
                path.display()
            )));
        };
        let bias = a.trim().parse::<f64>().map_err(|_| {
            CliError::Usage(format!(
                "{} line {line_no}: bias {a:?} is not a number",
                path.display()
            ))
        })?;
        let measured = b.trim().parse::<f64>().map_err(|_| {
            CliError::Usage(format!(
                "{} line {line_no}: measured value {b:?} is not a number",
                path.display()
            ))
        })?;
        points.push(CurvePoint { bias, measured });
    }
    if !saw_header {
        return Err(CliError::Usage(format!(
            "{}: no {CURVE_HEADER:?} header found",
            path.display()
        )));
    }
    Ok((meta, points))
}

/// Write a noise curve in the format `read_curve_csv` accepts.
pub fn render_curve_csv(frequency_hz: f64, resistance_ohm: f64, points: &[CurvePoint]) -> String {
    let mut out = String::new();
    out.push_str("# noise-versus-bias curve\n");
    out.push_str(&format!("# frequency_hz={}\n", fmt_f64(frequency_hz)));
    out.push_str(&format!("# resistance_ohm={}\n", fmt_f64(resistance_ohm)));
    out.push_str(CURVE_HEADER);
    out.push('\n');
    for pt in points {
        out.push_str(&format!("{},{}\n", fmt_f64(pt.bias), fmt_f64(pt.measured)));
    }
    out
}
