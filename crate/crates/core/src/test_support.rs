//! Shared helpers for the in-crate unit tests.

use rand::Rng;

use crate::linalg::Mat2;

/// Base seed for deterministic unit tests.
pub const RNG_SEED: u64 = 0x5eed_0001;

/// Random SPD matrix shaped like the covariances this simulator produces:
/// diagonal scales spread over up to `10^(+-scale_decades)` with correlation
/// bounded by `max_corr`. Keeping the correlation away from 1 keeps the
/// closed-form inversion well conditioned even when the eigenvalue ratio is
/// astronomical, which matches the real matrix population (scale-disparate,
/// moderately correlated).
pub fn random_spd(rng: &mut impl Rng, scale_decades: f64, max_corr: f64) -> Mat2 {
    let d0 = 10f64.powf(rng.random_range(-scale_decades..scale_decades));
    let d1 = 10f64.powf(rng.random_range(-scale_decades..scale_decades));
    let rho = rng.random_range(-max_corr..max_corr);
    let off = rho * (d0 * d1).sqrt();
    Mat2::new(d0, off, off, d1)
}

/// Largest entrywise relative error between two matrices, scaled to the
/// largest entry of the reference.
pub fn max_rel_err_mat(got: Mat2, want: Mat2) -> f64 {
    (got - want).max_abs() / want.max_abs().max(f64::MIN_POSITIVE)
}
