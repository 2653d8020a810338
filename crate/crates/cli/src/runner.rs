//! Run orchestration: plain Monte Carlo sweeps and shared helpers.

use std::path::{Path, PathBuf};

use arraysync_core::filters::Algorithm;
use arraysync_core::harness::{run_monte_carlo, MonteCarloSummary, SimConfig};
use arraysync_core::metrics::{mean, median, quantile};

use crate::config::Resolved;
use crate::output::{
    write_aggregates, write_convergence, AggregateRow, ConvergenceRow, RunManifest,
};
use crate::Result;

/// Across-trial statistics of the per-trial steady-state phase spread.
#[derive(Debug, Clone, Copy)]
pub struct SteadyStateStats {
    pub median: f64,
    pub mean: f64,
    pub p10: f64,
    pub p90: f64,
}

pub fn steady_state_stats(summary: &MonteCarloSummary) -> SteadyStateStats {
    let values: Vec<f64> = summary
        .trials
        .iter()
        .map(|t| t.steady_state_phase_std)
        .collect();
    SteadyStateStats {
        median: median(&values),
        mean: mean(&values),
        p10: quantile(&values, 0.1),
        p90: quantile(&values, 0.9),
    }
}

/// Convert one Monte Carlo summary to per-iteration aggregate rows.
pub fn aggregate_rows(cfg: &SimConfig, summary: &MonteCarloSummary) -> Vec<AggregateRow> {
    summary
        .per_iteration
        .iter()
        .map(|agg| AggregateRow {
            algorithm: cfg.algorithm.slug(),
            n_nodes: cfg.nodes,
            connectivity: cfg.connectivity,
            snr_db: cfg.snr_db,
            agg: *agg,
        })
        .collect()
}

/// Convert one Monte Carlo summary to per-trial convergence rows.
pub fn convergence_rows(cfg: &SimConfig, summary: &MonteCarloSummary) -> Vec<ConvergenceRow> {
    summary
        .trials
        .iter()
        .map(|t| ConvergenceRow {
            algorithm: cfg.algorithm.slug(),
            trial: t.trial,
            convergence_iteration: t.convergence_iteration,
        })
        .collect()
}

/// Run the resolved configuration for every selected algorithm and
/// write `aggregates.csv`, `convergence.csv` and `manifest.json` into
/// the output directory. Returns the paths written.
pub fn run_plain(resolved: &Resolved) -> Result<Vec<PathBuf>> {
    let mut aggregates = Vec::new();
    let mut convergence = Vec::new();
    let mut runs = Vec::new();

    for algorithm in resolved.choice.algorithms() {
        let cfg = SimConfig {
            algorithm,
            ..resolved.cfg
        };
        let summary = run_monte_carlo(&cfg)?;
        aggregates.extend(aggregate_rows(&cfg, &summary));
        convergence.extend(convergence_rows(&cfg, &summary));
        runs.push(cfg);
    }

    let agg_path = resolved.out.join("aggregates.csv");
    let conv_path = resolved.out.join("convergence.csv");
    write_aggregates(&agg_path, &aggregates)?;
    write_convergence(&conv_path, &convergence)?;

    let mut outputs = vec![agg_path, conv_path];
    outputs.push(write_manifest(&resolved.out, runs, &outputs)?);
    Ok(outputs)
}

/// Write the manifest next to the outputs it describes and return its
/// path. The manifest lists the data files, not itself.
pub fn write_manifest(out: &Path, runs: Vec<SimConfig>, outputs: &[PathBuf]) -> Result<PathBuf> {
    let path = out.join("manifest.json");
    RunManifest::new(runs, outputs.to_vec()).write(&path)?;
    Ok(path)
}

/// Fixed reporting order of algorithm sweeps.
pub const SWEEP_ORDER: [Algorithm; 4] = Algorithm::ALL;
