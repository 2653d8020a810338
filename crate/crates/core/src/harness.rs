//! Synchronous-round simulation engine and Monte Carlo orchestration.
//!
//! A trial draws a connected topology and initial oscillator states from its
//! own random streams, primes each node's filter with one self-measurement,
//! and then advances rounds in lockstep. One round is
//!
//! 1. every node measures its own state,
//! 2. first exchange: predicted pairs, measurements, measurement information,
//! 3. every node computes its updated pair,
//! 4. second exchange: updated pairs,
//! 5. every node fuses and predicts,
//! 6. actuation: nodes set their oscillators to their fused estimates
//!    (unless the run only observes),
//! 7. oscillator noise advances the true states,
//! 8. metrics are recorded.
//!
//! Trials are embarrassingly parallel. Every random draw comes from a stream
//! keyed by (seed, trial, node, role), so results are identical bit for bit
//! across thread counts and across repeated runs.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filters::{
    fuse_and_predict, init_filter, local_update, Algorithm, NodeFilterState, NodeMessage,
};
use crate::linalg::{InfoPair, Mat2};
use crate::metrics::{
    convergence_iteration, mean, median, population_std, quantile, residual_phase_errors,
    steady_state_value, wrap_angle, Actuation, MetricMode, ResidualInputs,
};
use crate::network::Topology;
use crate::noise::{
    draw_initial_state, evolve_state, exact_measurement, measure_state, validate_oscillator,
    ElectricalState, MeasurementNoise, MeasurementParams, NoiseDraw, OscillatorParams,
};
use crate::rng::{stream_rng, StreamRng, StreamRole};

/// Full description of a simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    /// Number of nodes in the array.
    pub nodes: usize,
    /// Edge probability of the random communication graph, in [0.05, 1].
    pub connectivity: f64,
    /// Self-measurement signal-to-noise ratio in dB.
    pub snr_db: f64,
    /// Carrier frequency in Hz.
    pub carrier_hz: f64,
    /// Measurement sampling rate in Hz.
    pub sampling_hz: f64,
    /// Update interval in seconds.
    pub update_interval_s: f64,
    /// Oscillator stability coefficient for the `1/T` term.
    pub beta1: f64,
    /// Oscillator stability coefficient for the `T` term.
    pub beta2: f64,
    /// Integrated phase-noise level in dB.
    pub phase_noise_db: f64,
    /// Initial frequency spread as a fraction of the carrier.
    pub init_spread: f64,
    /// Rounds per trial.
    pub iterations: usize,
    /// Monte Carlo trials.
    pub trials: u64,
    /// Estimator variant under test.
    pub algorithm: Algorithm,
    /// Master seed; every stream key includes it.
    pub seed: u64,
    /// Whether fused estimates are applied to the oscillators.
    pub actuation: Actuation,
    /// Residual phase error definition.
    pub metric: MetricMode,
    /// When false, measurement and oscillator noise draws are skipped (the
    /// noise model still shapes the filters). Used by invariance tests.
    pub noise_enabled: bool,
}

impl Default for SimConfig {
    fn default() -> SimConfig {
        SimConfig {
            nodes: 20,
            connectivity: 0.2,
            snr_db: 0.0,
            carrier_hz: 1e9,
            sampling_hz: 1e7,
            update_interval_s: 1e-4,
            beta1: 5e-19,
            beta2: 5e-19,
            phase_noise_db: -53.46,
            init_spread: 1e-4,
            iterations: 200,
            trials: 1000,
            algorithm: Algorithm::HaDkf,
            seed: 1,
            actuation: Actuation::ApplyEstimate,
            metric: MetricMode::ResidualFormula,
            noise_enabled: true,
        }
    }
}

impl SimConfig {
    pub fn oscillator(&self) -> OscillatorParams {
        OscillatorParams {
            fc: self.carrier_hz,
            interval_s: self.update_interval_s,
            beta1: self.beta1,
            beta2: self.beta2,
            phase_noise_db: self.phase_noise_db,
            init_spread: self.init_spread,
        }
    }

    pub fn measurement(&self) -> MeasurementParams {
        MeasurementParams::new(self.sampling_hz, self.snr_db, self.update_interval_s)
    }

    /// Check every field against its legal range; error messages name the
    /// field and range.
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::Config(format!(
                "nodes must be at least 2, got {}",
                self.nodes
            )));
        }
        if !(self.connectivity >= 0.05 && self.connectivity <= 1.0) {
            return Err(Error::Config(format!(
                "connectivity must lie in [0.05, 1], got {}",
                self.connectivity
            )));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::Config(format!(
                "snr-db must be finite, got {}",
                self.snr_db
            )));
        }
        if !(self.sampling_hz.is_finite() && self.sampling_hz > 0.0) {
            return Err(Error::Config(format!(
                "sampling-hz must be positive, got {}",
                self.sampling_hz
            )));
        }
        validate_oscillator(&self.oscillator())?;
        let samples = self.measurement().samples;
        if samples < 2 {
            return Err(Error::Config(format!(
                "sampling-hz x update-interval-s must give at least 2 samples per \
                 measurement, got {samples}"
            )));
        }
        if self.iterations < 1 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.trials < 1 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-trial constants: noise models in both forms plus the mean initial
/// frequency the error metrics are referenced to.
#[derive(Debug, Clone, Copy)]
pub struct TrialEnv {
    pub cfg: SimConfig,
    pub osc: OscillatorParams,
    pub meas: MeasurementNoise,
    pub process_info: Mat2,
    pub init_freq_mean: f64,
}

impl TrialEnv {
    pub fn new(cfg: &SimConfig, init_freq_mean: f64) -> Result<TrialEnv> {
        cfg.validate()?;
        let osc = cfg.oscillator();
        Ok(TrialEnv {
            cfg: *cfg,
            osc,
            meas: cfg.measurement().noise_model(cfg.carrier_hz)?,
            process_info: osc.process_noise_info()?,
            init_freq_mean,
        })
    }
}

/// Measurement and drift streams, one pair per node.
pub struct TrialRngs {
    pub measure: Vec<StreamRng>,
    pub drift: Vec<StreamRng>,
}

impl TrialRngs {
    pub fn new(seed: u64, trial: u64, nodes: usize) -> TrialRngs {
        TrialRngs {
            measure: (0..nodes)
                .map(|i| stream_rng(seed, trial, i as u64, StreamRole::Measurement))
                .collect(),
            drift: (0..nodes)
                .map(|i| stream_rng(seed, trial, i as u64, StreamRole::Drift))
                .collect(),
        }
    }
}

/// Buffers reused across rounds of one trial.
pub struct RoundScratch {
    msgs: Vec<NodeMessage>,
    upds: Vec<InfoPair>,
    inbox: Vec<(f64, NodeMessage)>,
    draws: Vec<NoiseDraw>,
    filtered: Vec<ElectricalState>,
    residuals: Vec<f64>,
}

impl RoundScratch {
    pub fn new(nodes: usize) -> RoundScratch {
        RoundScratch {
            msgs: Vec::with_capacity(nodes),
            upds: Vec::with_capacity(nodes),
            inbox: Vec::with_capacity(nodes),
            draws: Vec::with_capacity(nodes),
            filtered: Vec::with_capacity(nodes),
            residuals: Vec::with_capacity(nodes),
        }
    }
}

/// Everything recorded about one completed round.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Per-node true frequency minus the mean initial frequency, in Hz.
    pub freq_errors: Vec<f64>,
    /// Per-node true phase minus the across-node mean phase, wrapped to
    /// (-pi, pi].
    pub phase_errors: Vec<f64>,
    /// Per-node residual phase error in the configured metric, in rad.
    pub residuals: Vec<f64>,
    /// Across-node standard deviation of `residuals`.
    pub total_phase_std: f64,
}

/// One trial's full record sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub records: Vec<IterationRecord>,
    pub convergence_iteration: Option<usize>,
}

/// Prime every node's filter with one self-measurement.
pub fn init_filters(
    env: &TrialEnv,
    states: &[ElectricalState],
    rngs: &mut TrialRngs,
) -> Result<Vec<NodeFilterState>> {
    states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let (y, u) = if env.cfg.noise_enabled {
                measure_state(*s, &env.meas, &mut rngs.measure[i])
            } else {
                exact_measurement(*s, &env.meas)
            };
            init_filter(y, u, env.process_info)
        })
        .collect()
}

/// Advance true states and filters by one synchronous round and record it.
pub fn run_round(
    env: &TrialEnv,
    topo: &Topology,
    iteration: usize,
    states: &mut [ElectricalState],
    filters: &mut [NodeFilterState],
    rngs: &mut TrialRngs,
    scratch: &mut RoundScratch,
) -> Result<IterationRecord> {
    let n = states.len();
    let algo = env.cfg.algorithm;
    let RoundScratch {
        msgs,
        upds,
        inbox,
        draws,
        filtered,
        residuals,
    } = scratch;

    msgs.clear();
    for (i, s) in states.iter().enumerate() {
        let (y, u) = if env.cfg.noise_enabled {
            measure_state(*s, &env.meas, &mut rngs.measure[i])
        } else {
            exact_measurement(*s, &env.meas)
        };
        msgs.push(NodeMessage {
            pred: filters[i].pred,
            upd: filters[i].pred,
            y,
            u,
        });
    }

    upds.clear();
    for i in 0..n {
        inbox.clear();
        inbox.extend(topo.neighborhood(i).map(|(m, w)| (w, msgs[m])));
        upds.push(local_update(algo, inbox)?);
    }
    for (m, u) in msgs.iter_mut().zip(upds.iter()) {
        m.upd = *u;
    }
    for i in 0..n {
        inbox.clear();
        inbox.extend(topo.neighborhood(i).map(|(m, w)| (w, msgs[m])));
        filters[i] = fuse_and_predict(algo, upds[i], filters[i].process_info, inbox)?;
    }

    filtered.clear();
    for f in filters.iter() {
        filtered.push(ElectricalState::from_vec2(f.upd.mean()?));
    }
    if env.cfg.actuation == Actuation::ApplyEstimate {
        states.copy_from_slice(filtered);
    }

    draws.clear();
    for (i, s) in states.iter_mut().enumerate() {
        if env.cfg.noise_enabled {
            let (next, d) = evolve_state(*s, &env.osc, &mut rngs.drift[i]);
            *s = next;
            draws.push(d);
        } else {
            draws.push(NoiseDraw::ZERO);
        }
    }

    let inputs = ResidualInputs {
        interval_s: env.cfg.update_interval_s,
        draws,
        filtered,
        evolved: states,
    };
    residual_phase_errors(env.cfg.metric, &inputs, residuals);
    let mean_phase = states.iter().map(|s| s.phase_rad).sum::<f64>() / n as f64;
    Ok(IterationRecord {
        iteration,
        freq_errors: states
            .iter()
            .map(|s| s.freq_hz - env.init_freq_mean)
            .collect(),
        phase_errors: states
            .iter()
            .map(|s| wrap_angle(s.phase_rad - mean_phase))
            .collect(),
        residuals: residuals.clone(),
        total_phase_std: population_std(residuals),
    })
}

/// Run one full trial: fresh topology, fresh initial states, primed filters,
/// then `iterations` rounds.
pub fn run_trial(cfg: &SimConfig, trial: u64) -> Result<TrialResult> {
    let fail = |e: Error| e.in_trial(trial);

    let mut topo_rng = stream_rng(cfg.seed, trial, 0, StreamRole::Topology);
    let topo = Topology::random(cfg.nodes, cfg.connectivity, &mut topo_rng).map_err(fail)?;

    let osc = cfg.oscillator();
    let mut states: Vec<ElectricalState> = (0..cfg.nodes)
        .map(|i| {
            let mut rng = stream_rng(cfg.seed, trial, i as u64, StreamRole::InitialState);
            draw_initial_state(&osc, &mut rng)
        })
        .collect();
    let init_freq_mean = states.iter().map(|s| s.freq_hz).sum::<f64>() / cfg.nodes as f64;

    let env = TrialEnv::new(cfg, init_freq_mean).map_err(fail)?;
    let mut rngs = TrialRngs::new(cfg.seed, trial, cfg.nodes);
    let mut filters = init_filters(&env, &states, &mut rngs).map_err(fail)?;
    let mut scratch = RoundScratch::new(cfg.nodes);

    let mut records = Vec::with_capacity(cfg.iterations);
    for k in 0..cfg.iterations {
        let rec = run_round(
            &env,
            &topo,
            k,
            &mut states,
            &mut filters,
            &mut rngs,
            &mut scratch,
        )
        .map_err(fail)?;
        records.push(rec);
    }

    let series: Vec<f64> = records.iter().map(|r| r.total_phase_std).collect();
    Ok(TrialResult {
        records,
        convergence_iteration: convergence_iteration(&series),
    })
}

/// Per-trial reduction of a full record sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSummary {
    pub trial: u64,
    /// `total_phase_std` per iteration.
    pub phase_std: Vec<f64>,
    pub convergence_iteration: Option<usize>,
    /// Mean of `phase_std` over the trailing tenth of iterations.
    pub steady_state_phase_std: f64,
}

/// Across-trial statistics of `total_phase_std` at one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationAggregate {
    pub iteration: usize,
    pub median: f64,
    pub mean: f64,
    pub p10: f64,
    pub p90: f64,
}

/// Monte Carlo output: one summary per trial (in trial order) plus
/// per-iteration aggregates across trials.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub trials: Vec<TrialSummary>,
    pub per_iteration: Vec<IterationAggregate>,
}

/// Run all trials of a config, in parallel when a thread pool is available.
/// Output is independent of thread count and execution order.
pub fn run_monte_carlo(cfg: &SimConfig) -> Result<MonteCarloSummary> {
    cfg.validate()?;
    let trials: Vec<TrialSummary> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let result = run_trial(cfg, t)?;
            let phase_std: Vec<f64> = result.records.iter().map(|r| r.total_phase_std).collect();
            let steady_state_phase_std = steady_state_value(&phase_std);
            Ok(TrialSummary {
                trial: t,
                phase_std,
                convergence_iteration: result.convergence_iteration,
                steady_state_phase_std,
            })
        })
        .collect::<Result<_>>()?;

    let mut per_iteration = Vec::with_capacity(cfg.iterations);
    let mut column = vec![0.0; trials.len()];
    for k in 0..cfg.iterations {
        for (slot, t) in column.iter_mut().zip(trials.iter()) {
            *slot = t.phase_std[k];
        }
        per_iteration.push(IterationAggregate {
            iteration: k,
            median: median(&column),
            mean: mean(&column),
            p10: quantile(&column, 0.10),
            p90: quantile(&column, 0.90),
        });
    }
    Ok(MonteCarloSummary {
        trials,
        per_iteration,
    })
}
