//! Oscillator and measurement noise models.
//!
//! Each node carries a free-running oscillator whose electrical state is a
//! frequency/phase pair. Over one update interval of `T` seconds the state
//! picks up three random contributions:
//!
//! * a frequency step `df ~ N(0, sigma_f^2)`, where the short-term stability
//!   model gives `sigma_f = fc * sqrt(beta1 / T + beta2 * T)`,
//! * the phase shift that frequency step induces over the interval,
//!   `dtheta_f = -pi * T * df` (a deterministic function of `df`),
//! * white phase jitter `dtheta ~ N(0, sigma_theta^2)` with
//!   `sigma_theta = sqrt(2 * 10^(phase_noise_db / 10))` from the integrated
//!   phase-noise level.
//!
//! The joint covariance of the state increment `(df, dtheta_f + dtheta)` is
//! therefore
//!
//! ```text
//! Q = [ sigma_f^2              -pi*T*sigma_f^2                   ]
//!     [ -pi*T*sigma_f^2        pi^2*T^2*sigma_f^2 + sigma_theta^2 ]
//! ```
//!
//! with determinant `sigma_f^2 * sigma_theta^2`.
//!
//! Self-measurements of the state come from a single-tone estimator running
//! over `samples = round(T * fs)` points at a given SNR. Its error floors are
//! `sigma_f^m = fc * sqrt(6 / ((2*pi)^2 * samples^3 * snr))` for frequency and
//! `sigma_theta^m = 2 / (samples * snr)` for phase, the latter taken directly
//! as a standard deviation. The measurement covariance is diagonal.
//!
//! Phases are kept unwrapped everywhere in the simulation; wrapping happens
//! only in display and metric paths.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2};

/// Free-running oscillator model plus the synchronization interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    /// Carrier frequency in Hz.
    pub fc: f64,
    /// Update interval in seconds.
    pub interval_s: f64,
    /// Short-term stability coefficient for the `1/T` term.
    pub beta1: f64,
    /// Short-term stability coefficient for the `T` term.
    pub beta2: f64,
    /// Integrated phase-noise level in dB; sets the per-interval jitter.
    pub phase_noise_db: f64,
    /// Initial frequency spread as a fraction of the carrier.
    pub init_spread: f64,
}

impl OscillatorParams {
    /// Frequency-step standard deviation over one interval, in Hz.
    pub fn sigma_f(&self) -> f64 {
        self.fc * (self.beta1 / self.interval_s + self.beta2 * self.interval_s).sqrt()
    }

    /// Phase-jitter standard deviation over one interval, in rad.
    pub fn sigma_theta(&self) -> f64 {
        (2.0 * 10f64.powf(self.phase_noise_db / 10.0)).sqrt()
    }

    /// Covariance of the joint (frequency, phase) increment over one interval.
    pub fn process_noise_cov(&self) -> Mat2 {
        let sf2 = self.sigma_f().powi(2);
        let st2 = self.sigma_theta().powi(2);
        let t = self.interval_s;
        let off = -PI * t * sf2;
        Mat2::new(sf2, off, off, PI * PI * t * t * sf2 + st2)
    }

    /// Inverse of the process noise covariance.
    pub fn process_noise_info(&self) -> Result<Mat2> {
        Ok(self.process_noise_cov().inverse()?.symmetrized())
    }
}

/// Self-measurement model: sampling rate, SNR, and the derived sample count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementParams {
    /// Sampling rate in Hz.
    pub fs: f64,
    /// Signal-to-noise ratio in dB.
    pub snr_db: f64,
    /// Samples per measurement, `round(interval_s * fs)`.
    pub samples: u64,
}

impl MeasurementParams {
    pub fn new(fs: f64, snr_db: f64, interval_s: f64) -> MeasurementParams {
        MeasurementParams {
            fs,
            snr_db,
            samples: (fs * interval_s).round() as u64,
        }
    }

    /// SNR as a linear power ratio.
    pub fn snr_linear(&self) -> f64 {
        10f64.powf(self.snr_db / 10.0)
    }

    /// Estimator error floors as (sigma_f in Hz, sigma_theta in rad).
    pub fn crlb_sigmas(&self, fc: f64) -> (f64, f64) {
        let l = self.samples as f64;
        let snr = self.snr_linear();
        let sigma_f = fc * (6.0 / ((2.0 * PI).powi(2) * l.powi(3) * snr)).sqrt();
        let sigma_theta = 2.0 / (l * snr);
        (sigma_f, sigma_theta)
    }

    /// Diagonal measurement noise covariance.
    pub fn measurement_noise_cov(&self, fc: f64) -> Mat2 {
        let (sf, st) = self.crlb_sigmas(fc);
        Mat2::diagonal(sf * sf, st * st)
    }

    /// Precompute the full measurement model for a carrier.
    pub fn noise_model(&self, fc: f64) -> Result<MeasurementNoise> {
        let (sigma_f, sigma_theta) = self.crlb_sigmas(fc);
        let cov = Mat2::diagonal(sigma_f * sigma_f, sigma_theta * sigma_theta);
        Ok(MeasurementNoise {
            sigma_f,
            sigma_theta,
            cov,
            info: cov.inverse()?,
        })
    }
}

/// Measurement error floors with the covariance and its inverse, precomputed
/// once per run since they do not change between rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementNoise {
    pub sigma_f: f64,
    pub sigma_theta: f64,
    pub cov: Mat2,
    pub info: Mat2,
}

/// True electrical state of one node. The phase is unwrapped.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ElectricalState {
    pub freq_hz: f64,
    pub phase_rad: f64,
}

impl ElectricalState {
    pub fn new(freq_hz: f64, phase_rad: f64) -> ElectricalState {
        ElectricalState { freq_hz, phase_rad }
    }

    pub fn as_vec2(self) -> Vec2 {
        Vec2::new(self.freq_hz, self.phase_rad)
    }

    pub fn from_vec2(v: Vec2) -> ElectricalState {
        ElectricalState::new(v.a0, v.a1)
    }
}

/// One interval's worth of sampled oscillator noise.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseDraw {
    /// Frequency step in Hz.
    pub df_hz: f64,
    /// Phase shift induced by the frequency step, `-pi * interval * df`.
    pub dtheta_f_rad: f64,
    /// White phase jitter in rad.
    pub dtheta_rad: f64,
}

impl NoiseDraw {
    pub const ZERO: NoiseDraw = NoiseDraw {
        df_hz: 0.0,
        dtheta_f_rad: 0.0,
        dtheta_rad: 0.0,
    };
}

/// Sample one interval of oscillator noise.
pub fn draw_noise(p: &OscillatorParams, rng: &mut impl Rng) -> NoiseDraw {
    let z_f: f64 = rng.sample(StandardNormal);
    let z_t: f64 = rng.sample(StandardNormal);
    let df_hz = p.sigma_f() * z_f;
    NoiseDraw {
        df_hz,
        dtheta_f_rad: -PI * p.interval_s * df_hz,
        dtheta_rad: p.sigma_theta() * z_t,
    }
}

/// Advance a state by one noise draw.
pub fn apply_draw(s: ElectricalState, d: &NoiseDraw) -> ElectricalState {
    ElectricalState::new(
        s.freq_hz + d.df_hz,
        s.phase_rad + d.dtheta_f_rad + d.dtheta_rad,
    )
}

/// Advance a state by one sampled interval, returning the draw for metrics.
pub fn evolve_state(
    s: ElectricalState,
    p: &OscillatorParams,
    rng: &mut impl Rng,
) -> (ElectricalState, NoiseDraw) {
    let d = draw_noise(p, rng);
    (apply_draw(s, &d), d)
}

/// Initial condition: frequency `N(fc, (init_spread * fc)^2)`, phase uniform
/// over one turn.
pub fn draw_initial_state(p: &OscillatorParams, rng: &mut impl Rng) -> ElectricalState {
    let z: f64 = rng.sample(StandardNormal);
    let freq_hz = p.fc + p.init_spread * p.fc * z;
    let phase_rad = rng.random_range(0.0..std::f64::consts::TAU);
    ElectricalState::new(freq_hz, phase_rad)
}

/// Noisy self-measurement: the true state plus estimator error, together with
/// the measurement information matrix.
pub fn measure_state(
    s: ElectricalState,
    noise: &MeasurementNoise,
    rng: &mut impl Rng,
) -> (Vec2, Mat2) {
    let z_f: f64 = rng.sample(StandardNormal);
    let z_t: f64 = rng.sample(StandardNormal);
    let y = Vec2::new(
        s.freq_hz + noise.sigma_f * z_f,
        s.phase_rad + noise.sigma_theta * z_t,
    );
    (y, noise.info)
}

/// Error-free measurement, used when sampled noise is disabled.
pub fn exact_measurement(s: ElectricalState, noise: &MeasurementNoise) -> (Vec2, Mat2) {
    (s.as_vec2(), noise.info)
}

/// Validate oscillator parameters for use in a run.
pub fn validate_oscillator(p: &OscillatorParams) -> Result<()> {
    if !(p.fc.is_finite() && p.fc > 0.0) {
        return Err(Error::Config(format!("carrier must be positive, got {}", p.fc)));
    }
    if !(p.interval_s.is_finite() && p.interval_s > 0.0) {
        return Err(Error::Config(format!(
            "update interval must be positive, got {}",
            p.interval_s
        )));
    }
    if !(p.beta1 >= 0.0 && p.beta2 >= 0.0 && p.beta1.is_finite() && p.beta2.is_finite()) {
        return Err(Error::Config(format!(
            "stability coefficients must be finite and nonnegative, got {} and {}",
            p.beta1, p.beta2
        )));
    }
    if !p.phase_noise_db.is_finite() {
        return Err(Error::Config(format!(
            "phase noise level must be finite, got {}",
            p.phase_noise_db
        )));
    }
    if !(p.init_spread.is_finite() && p.init_spread >= 0.0) {
        return Err(Error::Config(format!(
            "initial spread must be finite and nonnegative, got {}",
            p.init_spread
        )));
    }
    Ok(())
}
