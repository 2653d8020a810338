//! Simulation core for open-loop synchronization of distributed oscillator arrays.
//!
//! The crate models a network of nodes, each carrying a free-running oscillator
//! described by a frequency/phase pair. Once per update interval every node
//! measures its own state, exchanges compact messages with its graph neighbors,
//! and runs one of four cooperative Kalman-style estimators in information
//! form. The harness advances truth and filters in lockstep synchronous rounds,
//! and a Monte Carlo driver aggregates phase-alignment statistics across
//! seeded, reproducible trials.
//!
//! Module map:
//!
//! * [`linalg`]: 2-vector/2x2 types, closed-form inversion, moment/information conversions
//! * [`noise`]: oscillator drift and jitter models, measurement error floors, process noise
//! * [`network`]: connected random graphs and Metropolis-Hastings consensus weights
//! * [`filters`]: the four estimator variants and their shared primitive steps
//! * [`metrics`]: phase wrapping, residual phase error, convergence detection, summaries
//! * [`harness`]: synchronous rounds, trials, Monte Carlo aggregation
//! * [`rng`]: counter-keyed deterministic random streams

pub mod error;
pub mod filters;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod network;
pub mod noise;
pub mod rng;

pub use error::{Error, Result};

#[cfg(test)]
pub(crate) mod test_support;
