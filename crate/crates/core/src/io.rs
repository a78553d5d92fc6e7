//! Event CSV reading/writing and result serialization.
//!
//! Event schema: header `time,ax_top,ay_top,ax_bot,ay_bot[,lvdt]`, time in
//! seconds on a uniform grid, accelerations in m/s^2, lvdt (the optional
//! wired reference) in meters. Floats are written with 9 significant
//! digits, which round-trips f64 values losslessly at that precision.
//! All writes go through a temp file + rename so readers never observe a
//! half-written file.

use std::fs;
use std::path::Path;

use crate::beam::PileGeometry;
use crate::error::{Error, Result};
use crate::fusion::EstimationResult;
use crate::inclination::{ChannelPair, SensorLocation};
use crate::scalar::Scalar;
use crate::series::{SignalUnit, TimeSeries};
use crate::synth::SensorEventRecord;

const EVENT_COLUMNS: [&str; 5] = ["time", "ax_top", "ay_top", "ax_bot", "ay_bot"];
const LVDT_COLUMN: &str = "lvdt";

fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

/// Write `contents` to `path` atomically (temp file in the same directory,
/// then rename).
pub fn atomic_write_text(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::format(format!("not a file path: {}", path.display())))?;
    let tmp_name = format!(".{}.tmp-{}", file_name.to_string_lossy(), std::process::id());
    let tmp = match dir {
        Some(d) => d.join(&tmp_name),
        None => tmp_name.clone().into(),
    };
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::Io(e)
    })
}

fn parse_cell(field: &str, row: usize, col: &str) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| {
        Error::format(format!("data row {row}, column {col}: cannot parse {field:?} as a number"))
    })?;
    if !v.is_finite() {
        return Err(Error::format(format!(
            "data row {row}, column {col}: non-finite value {field:?}"
        )));
    }
    Ok(v)
}

/// Recover (dt, t0) from a time column, enforcing a uniform grid to 1e-6
/// relative. Two candidates are re-rounded to the on-disk precision and
/// the better fit wins: the first step is exact whenever t0 = 0 and the
/// rate is clean (the span estimate degrades once the last timestamp
/// needs more than 9 digits), while the span average survives a large t0
/// that would cancel most of the first step's digits.
fn infer_clock(times: &[f64]) -> Result<(f64, f64)> {
    if times.len() < 2 {
        return Err(Error::format("need at least 2 data rows to infer the sample rate"));
    }
    let t0 = times[0];
    let span = times[times.len() - 1] - t0;
    if !(span > 0.0) {
        return Err(Error::format("time column must be strictly increasing"));
    }
    let snap = |x: f64| -> f64 { fmt_float(x).parse().expect("formatted float always parses") };
    let max_residual = |dt: f64| -> f64 {
        times
            .iter()
            .enumerate()
            .map(|(i, &ti)| (ti - (t0 + i as f64 * dt)).abs() / dt.max(ti.abs()))
            .fold(0.0, f64::max)
    };
    let dt_span = snap(span / (times.len() - 1) as f64);
    let dt_first = snap(times[1] - t0);
    let dt = if dt_first > 0.0 && max_residual(dt_first) < max_residual(dt_span) {
        dt_first
    } else {
        dt_span
    };
    for (i, &ti) in times.iter().enumerate() {
        let expect = t0 + i as f64 * dt;
        if (ti - expect).abs() > 1e-6 * dt.max(ti.abs()) {
            return Err(Error::format(format!(
                "nonuniform time step at data row {}: expected t = {}, found {}",
                i + 1,
                expect,
                ti
            )));
        }
    }
    Ok((dt, t0))
}

fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::format(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::format(format!("{}: {e}", path.display())))?
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (i, rec) in reader.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::format(format!("data row {row}: {e}")))?;
        if rec.len() != header.len() {
            return Err(Error::format(format!(
                "data row {row}: expected {} fields, found {}",
                header.len(),
                rec.len()
            )));
        }
        for (j, field) in rec.iter().enumerate() {
            columns[j].push(parse_cell(field, row, &header[j])?);
        }
    }
    if columns.first().is_none_or(|c| c.is_empty()) {
        return Err(Error::format("no data rows"));
    }
    Ok((header, columns))
}

/// Parse an event CSV. The file carries no geometry, so the caller supplies
/// it; the sample rate is inferred from the time column.
pub fn read_event<T: Scalar>(
    path: impl AsRef<Path>,
    geometry: PileGeometry<T>,
) -> Result<SensorEventRecord<T>> {
    let path = path.as_ref();
    let (header, mut columns) = read_table(path)?;
    let names: Vec<&str> = header.iter().map(String::as_str).collect();
    let has_lvdt = if names == EVENT_COLUMNS {
        false
    } else if names.len() == 6 && names[..5] == EVENT_COLUMNS && names[5] == LVDT_COLUMN {
        true
    } else {
        return Err(Error::format(format!(
            "bad header {:?}: expected time,ax_top,ay_top,ax_bot,ay_bot[,lvdt]",
            header.join(",")
        )));
    };
    let (dt, t0) = infer_clock(&columns[0])?;

    let mut take = |idx: usize, unit: SignalUnit| -> Result<TimeSeries<T>> {
        let vals = std::mem::take(&mut columns[idx]);
        TimeSeries::new(dt, t0, vals.into_iter().map(T::of).collect(), unit)
    };
    let ax_top = take(1, SignalUnit::Accel)?;
    let ay_top = take(2, SignalUnit::Accel)?;
    let ax_bot = take(3, SignalUnit::Accel)?;
    let ay_bot = take(4, SignalUnit::Accel)?;
    let reference = if has_lvdt {
        Some(take(5, SignalUnit::Displacement)?)
    } else {
        None
    };

    Ok(SensorEventRecord {
        top: ChannelPair::new(ax_top, ay_top, SensorLocation::Top)?,
        bottom: ChannelPair::new(ax_bot, ay_bot, SensorLocation::Bottom)?,
        reference,
        geometry,
        sample_rate_hz: 1.0 / dt,
        ground_truth: None,
    })
}

/// Write an event record in the standard schema. The lvdt column appears
/// only when the record carries a reference.
pub fn write_event<T: Scalar>(path: impl AsRef<Path>, record: &SensorEventRecord<T>) -> Result<()> {
    let n = record.top.ax.len();
    let mut out = String::with_capacity(32 + n * 80);
    out.push_str(&EVENT_COLUMNS.join(","));
    if record.reference.is_some() {
        out.push(',');
        out.push_str(LVDT_COLUMN);
    }
    out.push('\n');
    let cols: [&TimeSeries<T>; 4] = [
        &record.top.ax,
        &record.top.ay,
        &record.bottom.ax,
        &record.bottom.ay,
    ];
    for i in 0..n {
        out.push_str(&fmt_float(record.top.ax.time_at(i)));
        for c in cols {
            out.push(',');
            out.push_str(&fmt_float(c.values()[i].as_f64()));
        }
        if let Some(r) = &record.reference {
            out.push(',');
            out.push_str(&fmt_float(r.values()[i].as_f64()));
        }
        out.push('\n');
    }
    atomic_write_text(path, &out)
}

/// Write estimation output: per-sample components, totals, and the
/// reference when one was supplied.
pub fn write_displacements<T: Scalar>(
    path: impl AsRef<Path>,
    result: &EstimationResult<T>,
) -> Result<()> {
    let n = result.dynamic.len();
    let mut out = String::with_capacity(64 + n * 100);
    out.push_str("time,dyn,pseudo_1dof,pseudo_2dof,total_1dof,total_2dof");
    if result.reference.is_some() {
        out.push_str(",reference");
    }
    out.push('\n');
    let cols: [&TimeSeries<T>; 5] = [
        &result.dynamic,
        &result.pseudo_1dof,
        &result.pseudo_2dof,
        &result.total_1dof,
        &result.total_2dof,
    ];
    for i in 0..n {
        out.push_str(&fmt_float(result.dynamic.time_at(i)));
        for c in cols {
            out.push(',');
            out.push_str(&fmt_float(c.values()[i].as_f64()));
        }
        if let Some(r) = &result.reference {
            out.push(',');
            out.push_str(&fmt_float(r.values()[i].as_f64()));
        }
        out.push('\n');
    }
    atomic_write_text(path, &out)
}

/// Pull one displacement column out of a CSV with a leading time column.
/// With `column` unset the file must have exactly one non-time column.
pub fn read_displacement_column<T: Scalar>(
    path: impl AsRef<Path>,
    column: Option<&str>,
) -> Result<TimeSeries<T>> {
    let path = path.as_ref();
    let (header, mut columns) = read_table(path)?;
    if header.first().map(String::as_str) != Some("time") {
        return Err(Error::format(format!(
            "{}: first column must be time, found {:?}",
            path.display(),
            header.first().map(String::as_str).unwrap_or("")
        )));
    }
    let idx = match column {
        Some(name) => header
            .iter()
            .position(|h| h == name)
            .filter(|&i| i != 0)
            .ok_or_else(|| {
                Error::format(format!(
                    "{}: no column {:?}; available: {}",
                    path.display(),
                    name,
                    header[1..].join(", ")
                ))
            })?,
        None if header.len() == 2 => 1,
        None => {
            return Err(Error::format(format!(
                "{}: {} value columns; pick one of: {}",
                path.display(),
                header.len() - 1,
                header[1..].join(", ")
            )))
        }
    };
    let (dt, t0) = infer_clock(&columns[0])?;
    let vals = std::mem::take(&mut columns[idx]);
    TimeSeries::new(dt, t0, vals.into_iter().map(T::of).collect(), SignalUnit::Displacement)
}
