//! Figure presets: canned parameter sweeps matching the published
//! experiments.
//!
//! Presets pin the sweep axes (node counts, connectivity, SNR) and
//! take the trial count, iteration count and seed from the resolved
//! configuration; the trial count defaults to 200 when not given
//! explicitly (fig1 always runs a single trial).

use std::path::PathBuf;

use arraysync_core::filters::Algorithm;
use arraysync_core::harness::{run_monte_carlo, run_trial, IterationAggregate, SimConfig};

use crate::config::{Preset, Resolved};
use crate::output::{write_aggregates, write_convergence, write_traces, AggregateRow};
use crate::runner::{
    aggregate_rows, convergence_rows, steady_state_stats, write_manifest, SWEEP_ORDER,
};
use crate::Result;

const FIG2_NODE_GRID: [usize; 5] = [20, 40, 60, 80, 100];
const FIG2_CONNECTIVITIES: [f64; 2] = [0.2, 0.5];
const FIG3_NODE_GRID: [usize; 2] = [20, 60];
const PRESET_DEFAULT_TRIALS: u64 = 200;

pub fn run_preset(resolved: &Resolved, preset: Preset) -> Result<Vec<PathBuf>> {
    match preset {
        Preset::Fig1 => run_fig1(resolved),
        Preset::Fig2 => run_fig2(resolved),
        Preset::Fig3 => run_fig3(resolved),
    }
}

fn preset_trials(resolved: &Resolved) -> u64 {
    if resolved.trials_specified {
        resolved.cfg.trials
    } else {
        PRESET_DEFAULT_TRIALS
    }
}

/// Per-node frequency and phase error traces of a single trial at
/// N = 100, connectivity 0.2, SNR 0 dB: one file per algorithm.
fn run_fig1(resolved: &Resolved) -> Result<Vec<PathBuf>> {
    let base = SimConfig {
        nodes: 100,
        connectivity: 0.2,
        snr_db: 0.0,
        trials: 1,
        ..resolved.cfg
    };

    let mut runs = Vec::new();
    let mut outputs = Vec::new();
    for algorithm in SWEEP_ORDER {
        let cfg = SimConfig { algorithm, ..base };
        let result = run_trial(&cfg, 0)?;
        let path = resolved
            .out
            .join(format!("fig1_traces_{}.csv", algorithm.slug()));
        write_traces(&path, &[(0, &result)])?;
        runs.push(cfg);
        outputs.push(path);
    }

    outputs.push(write_manifest(&resolved.out, runs, &outputs)?);
    Ok(outputs)
}

/// Steady-state total phase spread versus array size: every algorithm
/// at SNR 0 dB and connectivity 0.2 and 0.5, plus HA-DKF at 10 dB.
/// One row per (algorithm, N, connectivity, SNR) cell; the row's
/// statistics summarize the per-trial steady-state values and its
/// iteration column marks the last simulated round.
fn run_fig2(resolved: &Resolved) -> Result<Vec<PathBuf>> {
    let base = SimConfig {
        snr_db: 0.0,
        trials: preset_trials(resolved),
        ..resolved.cfg
    };

    let mut cells: Vec<SimConfig> = Vec::new();
    for algorithm in SWEEP_ORDER {
        for connectivity in FIG2_CONNECTIVITIES {
            for nodes in FIG2_NODE_GRID {
                cells.push(SimConfig {
                    algorithm,
                    nodes,
                    connectivity,
                    ..base
                });
            }
        }
    }
    for connectivity in FIG2_CONNECTIVITIES {
        for nodes in FIG2_NODE_GRID {
            cells.push(SimConfig {
                algorithm: Algorithm::HaDkf,
                nodes,
                connectivity,
                snr_db: 10.0,
                ..base
            });
        }
    }

    let mut rows = Vec::new();
    for cfg in &cells {
        let summary = run_monte_carlo(cfg)?;
        let ss = steady_state_stats(&summary);
        rows.push(AggregateRow {
            algorithm: cfg.algorithm.slug(),
            n_nodes: cfg.nodes,
            connectivity: cfg.connectivity,
            snr_db: cfg.snr_db,
            agg: IterationAggregate {
                iteration: cfg.iterations - 1,
                median: ss.median,
                mean: ss.mean,
                p10: ss.p10,
                p90: ss.p90,
            },
        });
    }

    let path = resolved.out.join("fig2_steady_state.csv");
    write_aggregates(&path, &rows)?;
    let mut outputs = vec![path];
    outputs.push(write_manifest(&resolved.out, cells, &outputs)?);
    Ok(outputs)
}

/// Total phase spread versus iteration at N = 20 and N = 60
/// (connectivity 0.2, SNR 0 dB): per-iteration aggregates for every
/// algorithm plus one convergence file per array size.
fn run_fig3(resolved: &Resolved) -> Result<Vec<PathBuf>> {
    let base = SimConfig {
        connectivity: 0.2,
        snr_db: 0.0,
        trials: preset_trials(resolved),
        ..resolved.cfg
    };

    let mut runs = Vec::new();
    let mut agg_rows = Vec::new();
    let mut outputs = Vec::new();
    for nodes in FIG3_NODE_GRID {
        let mut conv_rows = Vec::new();
        for algorithm in SWEEP_ORDER {
            let cfg = SimConfig {
                algorithm,
                nodes,
                ..base
            };
            let summary = run_monte_carlo(&cfg)?;
            agg_rows.extend(aggregate_rows(&cfg, &summary));
            conv_rows.extend(convergence_rows(&cfg, &summary));
            runs.push(cfg);
        }
        let conv_path = resolved.out.join(format!("fig3_convergence_n{nodes}.csv"));
        write_convergence(&conv_path, &conv_rows)?;
        outputs.push(conv_path);
    }

    let agg_path = resolved.out.join("fig3_aggregates.csv");
    write_aggregates(&agg_path, &agg_rows)?;
    outputs.insert(0, agg_path);

    outputs.push(write_manifest(&resolved.out, runs, &outputs)?);
    Ok(outputs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::AlgorithmChoice;
    use arraysync_core::metrics::median;
    use std::path::Path;

    fn resolved(out: &Path, trials: u64, iterations: usize) -> Resolved {
        Resolved {
            cfg: SimConfig {
                trials,
                iterations,
                ..SimConfig::default()
            },
            choice: AlgorithmChoice::All,
            preset: None,
            out: out.to_path_buf(),
            threads: None,
            trials_specified: true,
        }
    }

    fn rows_of(path: &Path) -> Vec<String> {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .skip(1)
            .map(str::to_owned)
            .collect()
    }

    #[test]
    fn fig1_writes_one_trace_file_per_algorithm() {
        let dir = tempfile::tempdir().unwrap();
        let outputs = run_fig1(&resolved(dir.path(), 9, 2)).unwrap();
        assert_eq!(outputs.len(), 5, "four trace files plus the manifest");

        for (algorithm, path) in SWEEP_ORDER.iter().zip(&outputs) {
            assert!(path
                .file_name()
                .unwrap()
                .to_str()
                .unwrap()
                .contains(algorithm.slug()));
            // A single trial regardless of the requested trial count,
            // with one row per (iteration, node).
            let rows = rows_of(path);
            assert_eq!(rows.len(), 2 * 100);
            assert!(rows.iter().all(|r| r.starts_with("0,")));
        }

        let manifest = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
        let json: serde_json::Value = serde_json::from_str(&manifest).unwrap();
        assert_eq!(json["runs"].as_array().unwrap().len(), 4);
        assert_eq!(json["runs"][0]["trials"], 1);
        assert_eq!(json["runs"][0]["nodes"], 100);
    }

    #[test]
    fn fig2_emits_one_row_per_cell_including_the_high_snr_block() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = resolved(dir.path(), 2, 3);
        r.cfg.nodes = 7;
        let outputs = run_fig2(&r).unwrap();
        let rows = rows_of(&outputs[0]);
        // 4 algorithms x 2 connectivities x 5 node counts, plus the
        // HA-DKF 10 dB block over the same 2 x 5 grid.
        assert_eq!(rows.len(), 4 * 2 * 5 + 2 * 5);

        let ten_db: Vec<&String> = rows
            .iter()
            .filter(|r| r.split(',').nth(3).unwrap().parse::<f64>().unwrap() == 10.0)
            .collect();
        assert_eq!(ten_db.len(), 10);
        assert!(ten_db.iter().all(|r| r.starts_with("ha-dkf,")));

        // The iteration column marks the final round.
        assert!(rows
            .iter()
            .all(|r| r.split(',').nth(4).unwrap() == "2"));

        // The sweep pins the node axis; the base value is ignored.
        assert!(rows
            .iter()
            .all(|r| [20, 40, 60, 80, 100]
                .contains(&r.split(',').nth(1).unwrap().parse::<usize>().unwrap())));
    }

    #[test]
    fn fig3_emits_per_iteration_aggregates_and_per_size_convergence() {
        let dir = tempfile::tempdir().unwrap();
        let outputs = run_fig3(&resolved(dir.path(), 2, 3)).unwrap();
        assert_eq!(outputs.len(), 4, "aggregates, two convergence files, manifest");

        let agg_rows = rows_of(&outputs[0]);
        assert_eq!(agg_rows.len(), 2 * 4 * 3, "sizes x algorithms x iterations");

        for (path, nodes) in outputs[1..].iter().zip(FIG3_NODE_GRID) {
            assert!(path
                .file_name()
                .unwrap()
                .to_str()
                .unwrap()
                .contains(&format!("n{nodes}")));
            let conv_rows = rows_of(path);
            assert_eq!(conv_rows.len(), 4 * 2, "algorithms x trials");
        }
    }

    #[test]
    fn fig3_ha_dkf_median_curve_drops_below_dkf_and_stays_there() {
        // 20 trials keep the medians stable enough to check the
        // ordering while staying fast at these small sizes.
        let dir = tempfile::tempdir().unwrap();
        let outputs = run_fig3(&resolved(dir.path(), 20, 40)).unwrap();
        let rows = rows_of(&outputs[0]);

        let series = |algorithm: &str, nodes: &str| -> Vec<f64> {
            rows.iter()
                .filter(|r| {
                    let mut f = r.split(',');
                    f.next().unwrap() == algorithm && f.next().unwrap() == nodes
                })
                .map(|r| r.split(',').nth(5).unwrap().parse().unwrap())
                .collect()
        };

        for nodes in ["20", "60"] {
            let ha = series("ha-dkf", nodes);
            let dkf = series("dkf", nodes);
            assert_eq!(ha.len(), 40);
            let crossover = ha
                .iter()
                .zip(&dkf)
                .position(|(h, d)| h <= d)
                .expect("HA-DKF never reaches the DKF curve");
            assert!(
                ha[crossover..]
                    .iter()
                    .zip(&dkf[crossover..])
                    .all(|(h, d)| *h <= d * 1.02),
                "HA-DKF curve rises back above DKF after iteration {crossover} (N = {nodes})"
            );
            assert!(
                median(&ha[crossover..]) <= median(&dkf[crossover..]),
                "HA-DKF median not below DKF median after crossover (N = {nodes})"
            );
        }
    }

    #[test]
    fn presets_default_to_200_trials_when_none_are_given() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = resolved(dir.path(), 5, 3);
        r.trials_specified = false;
        assert_eq!(preset_trials(&r), 200);
        r.trials_specified = true;
        assert_eq!(preset_trials(&r), 5);
    }
}
