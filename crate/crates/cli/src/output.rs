//! CSV and manifest writers.
//!
//! Every file these writers produce is deterministic: rows are sorted
//! by (trial, iteration, node), floats carry 17 significant digits so
//! a parse gives back the identical f64, and reruns of the same
//! configuration produce byte-identical CSV regardless of the worker
//! thread count. The JSON manifest echoes the full configuration of
//! every run so any output file can be reproduced from it alone.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use arraysync_core::harness::{IterationAggregate, SimConfig, TrialResult};
use serde::Serialize;

use crate::Result;

/// Format a float with 17 significant digits.
///
/// 17 digits are enough to round-trip any f64 exactly, so parsing the
/// CSV recovers bit-identical values.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header of per-node trace files.
pub const TRACES_HEADER: &str = "trial,iteration,node,freq_error_hz,phase_error_rad";

/// Header of per-iteration aggregate files.
pub const AGGREGATES_HEADER: &str = "algorithm,n_nodes,connectivity,snr_db,iteration,\
phase_std_rad_median,phase_std_rad_mean,phase_std_rad_p10,phase_std_rad_p90";

/// Header of per-trial convergence files.
pub const CONVERGENCE_HEADER: &str = "algorithm,trial,convergence_iteration";

/// One aggregate row: the run it belongs to plus across-trial stats.
#[derive(Debug, Clone, Copy)]
pub struct AggregateRow {
    pub algorithm: &'static str,
    pub n_nodes: usize,
    pub connectivity: f64,
    pub snr_db: f64,
    pub agg: IterationAggregate,
}

/// One convergence row. `None` is written as an empty field.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub algorithm: &'static str,
    pub trial: u64,
    pub convergence_iteration: Option<usize>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// Write per-node frequency and phase error traces of one or more
/// trials, ordered by trial, then iteration, then node.
pub fn write_traces(path: &Path, trials: &[(u64, &TrialResult)]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{TRACES_HEADER}")?;
    for (trial, result) in trials {
        for record in &result.records {
            for node in 0..record.freq_errors.len() {
                writeln!(
                    w,
                    "{trial},{},{node},{},{}",
                    record.iteration,
                    fmt_f64(record.freq_errors[node]),
                    fmt_f64(record.phase_errors[node]),
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Write aggregate rows in the order given. An empty slice produces a
/// header-only file.
pub fn write_aggregates(path: &Path, rows: &[AggregateRow]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{AGGREGATES_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.n_nodes,
            fmt_f64(r.connectivity),
            fmt_f64(r.snr_db),
            r.agg.iteration,
            fmt_f64(r.agg.median),
            fmt_f64(r.agg.mean),
            fmt_f64(r.agg.p10),
            fmt_f64(r.agg.p90),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Write per-trial convergence iterations in the order given.
pub fn write_convergence(path: &Path, rows: &[ConvergenceRow]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{CONVERGENCE_HEADER}")?;
    for r in rows {
        match r.convergence_iteration {
            Some(it) => writeln!(w, "{},{},{it}", r.algorithm, r.trial)?,
            None => writeln!(w, "{},{},", r.algorithm, r.trial)?,
        }
    }
    w.flush()?;
    Ok(())
}

/// JSON run manifest accompanying every set of output files.
///
/// `runs` echoes the exact configuration of every simulation executed
/// by the invocation, so rerunning any of them reproduces the listed
/// outputs byte for byte (the manifest itself differs only in the
/// timestamp).
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub timestamp: String,
    pub runs: Vec<SimConfig>,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(runs: Vec<SimConfig>, outputs: Vec<PathBuf>) -> Self {
        RunManifest {
            tool: "arraysync",
            version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339(),
            runs,
            outputs,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, self)
            .map_err(|e| crate::CliError::Runtime(e.to_string()))?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}
