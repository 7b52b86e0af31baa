//! Plain-text serialisation of series, densities and revival reports.
//!
//! CSV files use `,`, `\n` line endings and a header row; every float is
//! written with 17 significant digits so reruns are byte-identical and values
//! round-trip exactly.

use std::io::{self, Write};

use serde::Serialize;

use crate::analysis::RevivalReport;
use crate::packet::AutocorrelationSeries;
use crate::radial::RadialGrid;

pub const SERIES_HEADER: &str = "t_au,re_A,im_A,abs_A";
pub const DENSITY_HEADER: &str = "r,density";
pub const REPORT_HEADER: &str = "q,t_frac_pred,T_frac_pred,T_meas,rel_err,peak_max";

/// `x` with 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_series_csv<W: Write>(mut out: W, series: &AutocorrelationSeries) -> io::Result<()> {
    writeln!(out, "{SERIES_HEADER}")?;
    for (t, a) in series.times.iter().zip(&series.values) {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(*t),
            fmt_f64(a.re),
            fmt_f64(a.im),
            fmt_f64(a.norm())
        )?;
    }
    Ok(())
}

pub fn write_density_csv<W: Write>(
    mut out: W,
    grid: &RadialGrid,
    density: &[f64],
) -> io::Result<()> {
    writeln!(out, "{DENSITY_HEADER}")?;
    for (r, p) in grid.r().iter().zip(density) {
        writeln!(out, "{},{}", fmt_f64(*r), fmt_f64(*p))?;
    }
    Ok(())
}

/// Flat report table; absent values are empty fields.
pub fn write_reports_csv<W: Write>(mut out: W, reports: &[RevivalReport]) -> io::Result<()> {
    writeln!(out, "{REPORT_HEADER}")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.q.map(|q| q.to_string()).unwrap_or_default(),
            fmt_f64(r.t_frac_predicted),
            fmt_f64(r.predicted_period),
            fmt_opt(r.measured_period),
            fmt_opt(r.relative_error),
            fmt_f64(r.peak_max),
        )?;
    }
    Ok(())
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}

/// The series as a JSON document embedding its energy model and weights.
pub fn write_series_json<W: Write>(out: W, series: &AutocorrelationSeries) -> io::Result<()> {
    write_json(out, series)
}
