use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::LoadCaseConfig;
use super::run::{compute_metrics, MetricsSummary, RunResult, TimeSeries};
use crate::control::RotationLog;
use crate::error::{Error, Result};

pub const SERIES_HEADER: [&str; 8] = ["t", "u1", "u2", "u3", "y1", "y2", "y3", "psi"];

/// Per-run metrics file: the case echoed back with its window statistics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsFile {
    pub case: LoadCaseConfig,
    pub metrics: MetricsSummary,
}

pub fn series_path(out: &Path, id: &str) -> PathBuf {
    out.join(format!("{id}.csv"))
}

pub fn metrics_path(out: &Path, id: &str) -> PathBuf {
    out.join(format!("{id}.metrics.json"))
}

/// `f64` values are written with Rust's shortest round-trip formatting.
pub fn write_series_csv(series: &TimeSeries, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(SERIES_HEADER)?;
    let mut rec: Vec<String> = Vec::with_capacity(8);
    for k in 0..series.len() {
        rec.clear();
        rec.push(series.t[k].to_string());
        rec.extend(series.u[k].iter().map(f64::to_string));
        rec.extend(series.y[k].iter().map(f64::to_string));
        rec.push(series.psi[k].to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_series_csv(path: &Path) -> Result<TimeSeries> {
    let mut r = csv::Reader::from_reader(BufReader::new(File::open(path)?));
    let header = r.headers()?.clone();
    if header.iter().ne(SERIES_HEADER.iter().copied()) {
        return Err(Error::Config(format!("{}: unexpected header {:?}", path.display(), header)));
    }
    let mut s = TimeSeries::default();
    for rec in r.records() {
        let rec = rec?;
        let v: Vec<f64> = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| Error::Config(format!("{}: {e}", path.display()))))
            .collect::<Result<_>>()?;
        if v.len() != 8 {
            return Err(Error::Config(format!("{}: row with {} fields", path.display(), v.len())));
        }
        s.t.push(v[0]);
        s.u.push([v[1], v[2], v[3]]);
        s.y.push([v[4], v[5], v[6]]);
        s.psi.push(v[7]);
    }
    Ok(s)
}

fn write_rotations(rows: &[RotationLog], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `<id>.csv`, `<id>.metrics.json` and, for adaptive controllers,
/// `<id>.rotations.csv`.
pub fn write_result(r: &RunResult, out: &Path) -> Result<()> {
    std::fs::create_dir_all(out)?;
    let id = &r.config.id;
    write_series_csv(&r.series, &series_path(out, id))?;
    if !r.rotations.is_empty() {
        write_rotations(&r.rotations, &out.join(format!("{id}.rotations.csv")))?;
    }
    let file = MetricsFile { case: r.config.clone(), metrics: r.metrics.clone() };
    let mut w = BufWriter::new(File::create(metrics_path(out, id))?);
    serde_json::to_writer_pretty(&mut w, &file)?;
    w.write_all(b"\n")?;
    Ok(())
}

/// Reloads every metrics file in `dir`. When the series is present the
/// window statistics are recomputed from it, so stored metrics never drift
/// from the data.
pub fn load_results(dir: &Path) -> Result<Vec<MetricsFile>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.to_string_lossy().ends_with(".metrics.json"))
        .collect();
    paths.sort();
    let mut out = Vec::with_capacity(paths.len());
    for p in paths {
        let mut f: MetricsFile = serde_json::from_reader(BufReader::new(File::open(&p)?))
            .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
        let csv = series_path(dir, &f.case.id);
        if csv.exists() {
            let s = read_series_csv(&csv)?;
            let (fails, clamps) = (f.metrics.dare_failures, f.metrics.clamp_events);
            f.metrics = compute_metrics(&s, f.case.plant.dt, f.case.plant.period, &f.metrics.window)?;
            f.metrics.dare_failures = fails;
            f.metrics.clamp_events = clamps;
        }
        out.push(f);
    }
    Ok(out)
}
