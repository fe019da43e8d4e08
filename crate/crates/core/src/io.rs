//! File formats: trace and spectrum CSVs, transmission tables, report JSON.
//!
//! Trace CSV: header `time_s,intensity`; spectrum CSV: `detuning_hz,value`
//! (value = intensity spectral density or transmission depending on the file
//! role). Comment lines start with `#`. All floats are written with 9
//! significant digits so identical runs produce identical bytes.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{SampledGrid, MIN_N_SAMPLES};
use crate::interp::linear_interp;
use crate::medium::MeasuredSpectrum;
use crate::metrics::AnalysisReport;
use crate::trace::{IntensityTrace, RealSpectrum};

fn fmt(v: f64) -> String {
    format!("{v:.8e}")
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Two-column CSV with `#` comments and one header line.
fn read_two_columns(path: &Path, expect_header: &str) -> Result<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            if line != expect_header {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("expected header '{expect_header}', found '{line}'"),
                ));
            }
            header_seen = true;
            continue;
        }
        let mut cols = line.split(',');
        let a = cols
            .next()
            .ok_or_else(|| parse_err(path, line_no, "missing first column"))?;
        let b = cols
            .next()
            .ok_or_else(|| parse_err(path, line_no, "missing second column"))?;
        if cols.next().is_some() {
            return Err(parse_err(path, line_no, "expected exactly two columns"));
        }
        let a: f64 = a
            .trim()
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad number '{}'", a.trim())))?;
        let b: f64 = b
            .trim()
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad number '{}'", b.trim())))?;
        if !a.is_finite() || !b.is_finite() {
            return Err(parse_err(path, line_no, "non-finite value"));
        }
        rows.push((a, b));
    }
    if !header_seen {
        return Err(parse_err(path, 1, format!("missing header '{expect_header}'")));
    }
    if rows.is_empty() {
        return Err(parse_err(path, 1, "no data rows"));
    }
    Ok(rows)
}

/// Raw (time, intensity) columns; time must be strictly increasing.
pub fn read_trace_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let rows = read_two_columns(path, "time_s,intensity")?;
    for w in rows.windows(2) {
        if w[1].0.is_nan() || w[1].0 <= w[0].0 {
            return Err(parse_err(
                path,
                0,
                format!("time column not strictly increasing near t = {:e}", w[1].0),
            ));
        }
    }
    Ok(rows.into_iter().unzip())
}

pub fn write_trace_csv(path: &Path, trace: &IntensityTrace) -> Result<()> {
    let mut out = String::with_capacity(trace.samples().len() * 32);
    out.push_str("time_s,intensity\n");
    for (i, &v) in trace.samples().iter().enumerate() {
        out.push_str(&fmt(trace.grid().time_at(i)));
        out.push(',');
        out.push_str(&fmt(v));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// (detuning, value) rows; no ordering requirement beyond what the consumer
/// imposes.
pub fn read_spectrum_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    read_two_columns(path, "detuning_hz,value")
}

pub fn write_spectrum_csv(path: &Path, spectrum: &RealSpectrum) -> Result<()> {
    write_spectrum_columns(
        path,
        &spectrum.grid().detunings(),
        spectrum.values(),
        None,
    )
}

pub fn write_spectrum_columns(
    path: &Path,
    detunings: &[f64],
    values: &[f64],
    comment: Option<&str>,
) -> Result<()> {
    let mut out = String::with_capacity(values.len() * 32);
    if let Some(c) = comment {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str("detuning_hz,value\n");
    for (f, v) in detunings.iter().zip(values) {
        out.push_str(&fmt(*f));
        out.push(',');
        out.push_str(&fmt(*v));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a transmission table and validates it as a measured spectrum.
pub fn read_measured_spectrum(path: &Path) -> Result<MeasuredSpectrum> {
    let rows = read_spectrum_csv(path)?;
    MeasuredSpectrum::new(rows)
}

pub fn write_report_json(path: &Path, report: &AnalysisReport) -> Result<()> {
    fs::write(path, report.to_json())?;
    Ok(())
}

/// Resamples (time, value) columns onto a power-of-two uniform grid by
/// linear interpolation. The grid spans exactly the data range.
pub fn resample_to_grid(times: &[f64], values: &[f64]) -> Result<IntensityTrace> {
    if times.len() != values.len() || times.len() < 2 {
        return Err(Error::InvalidArg(
            "resampling needs matching time/value columns with >= 2 rows".into(),
        ));
    }
    let n = times.len().next_power_of_two().max(MIN_N_SAMPLES);
    let t0 = times[0];
    let t1 = times[times.len() - 1];
    let dt = (t1 - t0) / (n - 1) as f64;
    let grid = SampledGrid::new(n, dt, t0)?;
    let samples: Vec<f64> = (0..n)
        .map(|i| linear_interp(times, values, grid.time_at(i)))
        .collect();
    IntensityTrace::new(grid, samples)
}

/// Resamples a pair of traces onto one common grid (union of their spans),
/// zero outside each trace's own range. Returns the common pair.
pub fn resample_to_common_grid(
    a: (&[f64], &[f64]),
    b: (&[f64], &[f64]),
) -> Result<(IntensityTrace, IntensityTrace)> {
    let t_start = a.0[0].min(b.0[0]);
    let t_end = a.0[a.0.len() - 1].max(b.0[b.0.len() - 1]);
    let n = a.0.len().max(b.0.len()).next_power_of_two().max(MIN_N_SAMPLES);
    let dt = (t_end - t_start) / (n - 1) as f64;
    let grid = SampledGrid::new(n, dt, t_start)?;
    let sample = |(ts, vs): (&[f64], &[f64])| -> Result<IntensityTrace> {
        let samples: Vec<f64> = (0..n)
            .map(|i| {
                let t = grid.time_at(i);
                if t < ts[0] || t > ts[ts.len() - 1] {
                    0.0
                } else {
                    linear_interp(ts, vs, t)
                }
            })
            .collect();
        IntensityTrace::new(grid.clone(), samples)
    };
    Ok((sample(a)?, sample(b)?))
}
