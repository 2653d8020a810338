//! Synchronization metrics: residual phase error, convergence detection, and
//! small statistics helpers.
//!
//! The quality figure for a round is the across-node standard deviation of
//! the per-node residual phase error
//!
//! ```text
//! dphi_n = 2*pi*df_n*T + 2*pi*eps_f*T + dtheta_f_n + dtheta_n + eps_theta
//! ```
//!
//! which combines the interval's oscillator noise draw (df, dtheta_f, dtheta)
//! with the node's post-filter deviation from the array mean (eps_f in
//! frequency, eps_theta in phase). An alternative mode skips the composition
//! and reports the plain deviation of the evolved true state from the array
//! mean, `2*pi*(f_n - fbar)*T + wrap(theta_n - thetabar)`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::noise::{ElectricalState, NoiseDraw};

/// How per-node residual phase errors are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum MetricMode {
    /// Compose drift, jitter, and post-filter deviations per the formula
    /// above.
    #[default]
    #[serde(rename = "paper-formula")]
    ResidualFormula,
    /// Deviation of the evolved true state from the across-node mean.
    #[serde(rename = "deviation-from-mean")]
    DeviationFromMean,
}

impl MetricMode {
    pub fn token(self) -> &'static str {
        match self {
            MetricMode::ResidualFormula => "paper-formula",
            MetricMode::DeviationFromMean => "deviation-from-mean",
        }
    }
}

impl fmt::Display for MetricMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for MetricMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<MetricMode, Error> {
        match s {
            "paper-formula" => Ok(MetricMode::ResidualFormula),
            "deviation-from-mean" => Ok(MetricMode::DeviationFromMean),
            other => Err(Error::Config(format!(
                "unknown metric '{other}', expected paper-formula or deviation-from-mean"
            ))),
        }
    }
}

/// Whether nodes apply their fused estimates to their oscillators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Actuation {
    /// Each node sets its true frequency and phase to its fused estimate
    /// after every round.
    #[default]
    #[serde(rename = "apply")]
    ApplyEstimate,
    /// Filters track the free-running oscillators without correcting them.
    #[serde(rename = "observe")]
    ObserveOnly,
}

impl Actuation {
    pub fn token(self) -> &'static str {
        match self {
            Actuation::ApplyEstimate => "apply",
            Actuation::ObserveOnly => "observe",
        }
    }
}

impl fmt::Display for Actuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Actuation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Actuation, Error> {
        match s {
            "apply" => Ok(Actuation::ApplyEstimate),
            "observe" => Ok(Actuation::ObserveOnly),
            other => Err(Error::Config(format!(
                "unknown actuation '{other}', expected apply or observe"
            ))),
        }
    }
}

/// Map an angle to (-pi, pi].
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population standard deviation (divide by n).
pub fn population_std(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Linear-interpolation quantile of an unsorted slice, `p` in [0, 1].
pub fn quantile(xs: &[f64], p: f64) -> f64 {
    assert!(!xs.is_empty(), "quantile of an empty slice");
    assert!((0.0..=1.0).contains(&p), "quantile level out of range");
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite metric value"));
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

pub fn median(xs: &[f64]) -> f64 {
    quantile(xs, 0.5)
}

/// Everything a round leaves behind that the residual formula consumes:
/// the per-node noise draws applied at the end of the round, the post-filter
/// states before those draws, and the evolved true states after them.
#[derive(Debug, Clone, Copy)]
pub struct ResidualInputs<'a> {
    pub interval_s: f64,
    pub draws: &'a [NoiseDraw],
    pub filtered: &'a [ElectricalState],
    pub evolved: &'a [ElectricalState],
}

fn state_means(states: &[ElectricalState]) -> (f64, f64) {
    let n = states.len() as f64;
    let f = states.iter().map(|s| s.freq_hz).sum::<f64>() / n;
    let t = states.iter().map(|s| s.phase_rad).sum::<f64>() / n;
    (f, t)
}

fn residual_with_means(
    mode: MetricMode,
    inp: &ResidualInputs<'_>,
    node: usize,
    means: (f64, f64),
) -> f64 {
    match mode {
        MetricMode::ResidualFormula => {
            let d = &inp.draws[node];
            let eps_f = inp.filtered[node].freq_hz - means.0;
            let eps_theta = inp.filtered[node].phase_rad - means.1;
            TAU * d.df_hz * inp.interval_s
                + TAU * eps_f * inp.interval_s
                + d.dtheta_f_rad
                + d.dtheta_rad
                + eps_theta
        }
        MetricMode::DeviationFromMean => {
            let s = &inp.evolved[node];
            TAU * (s.freq_hz - means.0) * inp.interval_s + wrap_angle(s.phase_rad - means.1)
        }
    }
}

/// Residual phase error of one node, in rad.
pub fn residual_phase_error(mode: MetricMode, inp: &ResidualInputs<'_>, node: usize) -> f64 {
    let means = match mode {
        MetricMode::ResidualFormula => state_means(inp.filtered),
        MetricMode::DeviationFromMean => state_means(inp.evolved),
    };
    residual_with_means(mode, inp, node, means)
}

/// Residual phase errors for every node, replacing the contents of `out`.
pub fn residual_phase_errors(mode: MetricMode, inp: &ResidualInputs<'_>, out: &mut Vec<f64>) {
    let means = match mode {
        MetricMode::ResidualFormula => state_means(inp.filtered),
        MetricMode::DeviationFromMean => state_means(inp.evolved),
    };
    out.clear();
    out.extend((0..inp.evolved.len()).map(|n| residual_with_means(mode, inp, n, means)));
}

/// Number of trailing samples the steady-state window covers: 10% of the
/// series, at least one sample.
fn tail_len(len: usize) -> usize {
    (len.div_ceil(10)).max(1)
}

/// Mean over the steady-state window at the end of the series.
pub fn steady_state_value(series: &[f64]) -> f64 {
    if series.is_empty() {
        return 0.0;
    }
    mean(&series[series.len() - tail_len(series.len())..])
}

/// First iteration from which the series stays within 5% relative of its
/// steady-state value, or `None` if even the final value strays outside.
pub fn convergence_iteration(series: &[f64]) -> Option<usize> {
    if series.is_empty() {
        return None;
    }
    let target = steady_state_value(series);
    let band = 0.05 * target.abs();
    let mut first_inside = series.len();
    for (k, x) in series.iter().enumerate().rev() {
        if (x - target).abs() <= band {
            first_inside = k;
        } else {
            break;
        }
    }
    if first_inside == series.len() {
        None
    } else {
        Some(first_inside)
    }
}
