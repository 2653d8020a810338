//! Configuration resolution: defaults, config file, command line flags.
//!
//! Values are resolved in increasing priority: built-in defaults, then
//! the flat key=value config file named by `--config`, then explicit
//! flags. The resolved configuration is validated once at the end, so
//! out-of-range values are rejected with the field name and the legal
//! range no matter where they came from.

use std::path::PathBuf;

use arraysync_core::filters::Algorithm;
use arraysync_core::harness::SimConfig;
use arraysync_core::metrics::{Actuation, MetricMode};
use clap::Parser;

use crate::{CliError, Result};

/// Which algorithms a run covers. `--algorithm all` sweeps all four.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmChoice {
    One(Algorithm),
    All,
}

impl AlgorithmChoice {
    /// The algorithms to run, in fixed reporting order.
    pub fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgorithmChoice::One(a) => vec![a],
            AlgorithmChoice::All => Algorithm::ALL.to_vec(),
        }
    }
}

impl std::str::FromStr for AlgorithmChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "all" {
            return Ok(AlgorithmChoice::All);
        }
        s.parse::<Algorithm>()
            .map(AlgorithmChoice::One)
            .map_err(|e| e.to_string())
    }
}

/// Figure preset selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fig1" => Ok(Preset::Fig1),
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            other => Err(format!(
                "unknown preset '{other}', expected fig1, fig2 or fig3"
            )),
        }
    }
}

/// Command line flags. Every value is optional so that the precedence
/// chain can tell "not given" apart from "given the default value".
#[derive(Debug, Parser)]
#[command(
    name = "arraysync",
    version,
    about = "Simulates frequency and phase synchronization of distributed oscillator arrays"
)]
pub struct Args {
    /// Flat key=value config file read before the flags
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Number of array nodes
    #[arg(long)]
    pub nodes: Option<usize>,

    /// Edge probability of the random communication graph, in [0.05, 1]
    #[arg(long)]
    pub connectivity: Option<f64>,

    /// Measurement signal-to-noise ratio in dB
    #[arg(long)]
    pub snr_db: Option<f64>,

    /// Number of Monte Carlo trials
    #[arg(long)]
    pub trials: Option<u64>,

    /// Number of synchronization rounds per trial
    #[arg(long)]
    pub iterations: Option<usize>,

    /// Algorithm to run: dkf, kf-dfpc, kf-hcmci, ha-dkf or all
    #[arg(long)]
    pub algorithm: Option<AlgorithmChoice>,

    /// Base seed for the reproducible random streams
    #[arg(long)]
    pub seed: Option<u64>,

    /// Seconds between synchronization rounds
    #[arg(long)]
    pub update_interval_s: Option<f64>,

    /// Nominal carrier frequency in Hz
    #[arg(long)]
    pub carrier_hz: Option<f64>,

    /// Measurement sampling rate in Hz
    #[arg(long)]
    pub sampling_hz: Option<f64>,

    /// Phase error metric: paper-formula or deviation-from-mean
    #[arg(long)]
    pub metric: Option<MetricMode>,

    /// Whether estimates steer the oscillators: apply or observe
    #[arg(long)]
    pub actuation: Option<Actuation>,

    /// Output directory for CSV files and the run manifest
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Figure preset: fig1, fig2 or fig3
    #[arg(long)]
    pub preset: Option<Preset>,

    /// Size of the worker thread pool (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Fully resolved invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    /// Base simulation configuration. `cfg.algorithm` holds the first
    /// algorithm of `choice`; sweeps override it per run.
    pub cfg: SimConfig,
    pub choice: AlgorithmChoice,
    pub preset: Option<Preset>,
    pub out: PathBuf,
    pub threads: Option<usize>,
    /// True when the trial count came from the user rather than the
    /// built-in default. Presets pick their own default otherwise.
    pub trials_specified: bool,
}

/// Resolve defaults, config file, and flags into one configuration.
pub fn resolve(args: &Args) -> Result<Resolved> {
    let mut cfg = SimConfig::default();
    let mut choice = AlgorithmChoice::One(cfg.algorithm);
    let mut trials_specified = args.trials.is_some();

    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        trials_specified |= apply_file(&mut cfg, &mut choice, &text)?;
    }

    if let Some(v) = args.nodes {
        cfg.nodes = v;
    }
    if let Some(v) = args.connectivity {
        cfg.connectivity = v;
    }
    if let Some(v) = args.snr_db {
        cfg.snr_db = v;
    }
    if let Some(v) = args.trials {
        cfg.trials = v;
    }
    if let Some(v) = args.iterations {
        cfg.iterations = v;
    }
    if let Some(v) = args.algorithm {
        choice = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.update_interval_s {
        cfg.update_interval_s = v;
    }
    if let Some(v) = args.carrier_hz {
        cfg.carrier_hz = v;
    }
    if let Some(v) = args.sampling_hz {
        cfg.sampling_hz = v;
    }
    if let Some(v) = args.metric {
        cfg.metric = v;
    }
    if let Some(v) = args.actuation {
        cfg.actuation = v;
    }

    cfg.algorithm = choice.algorithms()[0];
    cfg.validate()?;

    Ok(Resolved {
        cfg,
        choice,
        preset: args.preset,
        out: args.out.clone().unwrap_or_else(|| PathBuf::from("out")),
        threads: args.threads,
        trials_specified,
    })
}

/// Apply a flat key=value config file on top of `cfg`.
///
/// Keys mirror the flag names with dashes or underscores accepted
/// interchangeably. Blank lines and lines starting with `#` are
/// ignored. Unknown keys are rejected by name. Returns whether the
/// file set the trial count.
fn apply_file(
    cfg: &mut SimConfig,
    choice: &mut AlgorithmChoice,
    text: &str,
) -> Result<bool> {
    let mut saw_trials = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "config file line {}: expected key=value, got '{line}'",
                lineno + 1
            ))
        })?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        saw_trials |= key == "trials";
        apply_key(cfg, choice, &key, value).map_err(|msg| {
            CliError::Config(format!("config file line {}: {msg}", lineno + 1))
        })?;
    }
    Ok(saw_trials)
}

fn apply_key(
    cfg: &mut SimConfig,
    choice: &mut AlgorithmChoice,
    key: &str,
    value: &str,
) -> std::result::Result<(), String> {
    fn num<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String>
    where
        T::Err: std::fmt::Display,
    {
        value
            .parse::<T>()
            .map_err(|e| format!("invalid value '{value}' for {key}: {e}"))
    }

    match key {
        "nodes" => cfg.nodes = num(key, value)?,
        "connectivity" => cfg.connectivity = num(key, value)?,
        "snr_db" => cfg.snr_db = num(key, value)?,
        "trials" => cfg.trials = num(key, value)?,
        "iterations" => cfg.iterations = num(key, value)?,
        "seed" => cfg.seed = num(key, value)?,
        "update_interval_s" => cfg.update_interval_s = num(key, value)?,
        "carrier_hz" => cfg.carrier_hz = num(key, value)?,
        "sampling_hz" => cfg.sampling_hz = num(key, value)?,
        "beta1" => cfg.beta1 = num(key, value)?,
        "beta2" => cfg.beta2 = num(key, value)?,
        "phase_noise_db" => cfg.phase_noise_db = num(key, value)?,
        // The initial frequency spread as a fraction of the carrier;
        // the default 1e-4 corresponds to 100 ppm.
        "init_ppm" | "init_spread" => cfg.init_spread = num(key, value)?,
        "algorithm" => *choice = num(key, value)?,
        "metric" => cfg.metric = num(key, value)?,
        "actuation" => cfg.actuation = num(key, value)?,
        other => return Err(format!("unknown config key '{other}'")),
    }
    Ok(())
}
