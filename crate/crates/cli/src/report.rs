use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::CliError;
use crate::run::Report;

pub const CSV_HEADER: [&str; 7] = ["t", "r", "theta", "phi", "component", "re", "im"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Seventeen significant digits in scientific notation; `-0` prints as `0`.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Pretty printing with every float written by [`format_float`].
struct FixedFloats<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_float(value).as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

fn render_json(report: &Report) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, FixedFloats(PrettyFormatter::new()));
    report
        .summary
        .serialize(&mut ser)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

fn render_csv(report: &Report) -> Result<Vec<u8>, CliError> {
    let internal = |e: csv::Error| CliError::Internal(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(internal)?;
    for row in &report.rows {
        w.write_record([
            format_float(row.t),
            format_float(row.r),
            format_float(row.theta),
            format_float(row.phi),
            row.component.clone(),
            format_float(row.value.re),
            format_float(row.value.im),
        ])
        .map_err(internal)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Internal(e.to_string()))
}

/// Serializes the report. Keys are sorted, so identical reports give
/// identical bytes.
pub fn render(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => render_json(report),
        Format::Csv if report.rows.is_empty() => Err(CliError::Schema(
            "csv output needs a grid sweep (spherical or transition mode)".into(),
        )),
        Format::Csv => render_csv(report),
    }
}

/// Writes to `out`, or to standard output when absent.
pub fn emit_report(report: &Report, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let bytes = render(report, format)?;
    let io_err = |e: io::Error| CliError::Internal(e.to_string());
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(io_err),
        None => io::stdout().lock().write_all(&bytes).map_err(io_err),
    }
}
