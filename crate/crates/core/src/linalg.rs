//! Fixed-size linear algebra for two-state (frequency, phase) estimators.
//!
//! Everything downstream works on 2-vectors and 2x2 matrices, so this module
//! hand-rolls the few operations needed instead of pulling in a general matrix
//! crate: closed-form inversion via the adjugate, symmetric eigenvalue
//! extraction, and conversions between moment form (mean, covariance) and
//! information form (omega = inverse covariance, mu = omega * mean).
//!
//! Inversion refuses matrices whose determinant magnitude is at or below
//! [`SINGULARITY_THRESHOLD`] instead of silently producing infinities.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Determinant magnitudes at or below this are treated as singular.
pub const SINGULARITY_THRESHOLD: f64 = 1e-300;

/// Column 2-vector. By convention `a0` is frequency-like (Hz) and `a1` is
/// phase-like (rad).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub a0: f64,
    pub a1: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { a0: 0.0, a1: 0.0 };

    pub fn new(a0: f64, a1: f64) -> Vec2 {
        Vec2 { a0, a1 }
    }

    pub fn is_finite(self) -> bool {
        self.a0.is_finite() && self.a1.is_finite()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.a0.abs().max(self.a1.abs())
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.a0 + o.a0, self.a1 + o.a1)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.a0 - o.a0, self.a1 - o.a1)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.a0 * s, self.a1 * s)
    }
}

/// Row-major 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2 {
    pub m00: f64,
    pub m01: f64,
    pub m10: f64,
    pub m11: f64,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 {
        m00: 0.0,
        m01: 0.0,
        m10: 0.0,
        m11: 0.0,
    };

    pub const IDENTITY: Mat2 = Mat2 {
        m00: 1.0,
        m01: 0.0,
        m10: 0.0,
        m11: 1.0,
    };

    pub fn new(m00: f64, m01: f64, m10: f64, m11: f64) -> Mat2 {
        Mat2 { m00, m01, m10, m11 }
    }

    pub fn diagonal(d0: f64, d1: f64) -> Mat2 {
        Mat2::new(d0, 0.0, 0.0, d1)
    }

    pub fn det(self) -> f64 {
        self.m00 * self.m11 - self.m01 * self.m10
    }

    pub fn trace(self) -> f64 {
        self.m00 + self.m11
    }

    pub fn transpose(self) -> Mat2 {
        Mat2::new(self.m00, self.m10, self.m01, self.m11)
    }

    pub fn is_finite(self) -> bool {
        self.m00.is_finite() && self.m01.is_finite() && self.m10.is_finite() && self.m11.is_finite()
    }

    /// Largest absolute entry.
    pub fn max_abs(self) -> f64 {
        self.m00
            .abs()
            .max(self.m01.abs())
            .max(self.m10.abs())
            .max(self.m11.abs())
    }

    /// Off-diagonal agreement scaled to the off-diagonal magnitude.
    pub fn is_symmetric(self) -> bool {
        (self.m01 - self.m10).abs() <= 1e-12 * self.m01.abs().max(1.0)
    }

    /// Average the off-diagonal entries. Products that are symmetric in exact
    /// arithmetic pick up last-bit asymmetry in floats; callers that rely on
    /// symmetry apply this right after such products.
    pub fn symmetrized(self) -> Mat2 {
        let off = 0.5 * (self.m01 + self.m10);
        Mat2::new(self.m00, off, off, self.m11)
    }

    /// Eigenvalues of a symmetric matrix as (min, max). The small eigenvalue
    /// is recovered from det / lambda_max, which stays accurate when the two
    /// eigenvalues sit many orders of magnitude apart.
    pub fn sym_eigenvalues(self) -> (f64, f64) {
        let mid = 0.5 * (self.m00 + self.m11);
        let half_gap = (0.25 * (self.m00 - self.m11).powi(2) + self.m01 * self.m10)
            .max(0.0)
            .sqrt();
        let lmax = mid + half_gap;
        let lmin = if lmax != 0.0 {
            self.det() / lmax
        } else {
            mid - half_gap
        };
        (lmin, lmax)
    }

    /// Symmetric positive definiteness within a relative slack: the smallest
    /// eigenvalue must exceed `-slack * |trace|`. The slack absorbs rounding
    /// on eigenvalues many orders of magnitude below the trace.
    pub fn is_spd_within(self, slack: f64) -> bool {
        if !self.is_finite() || !self.is_symmetric() {
            return false;
        }
        let (lmin, lmax) = self.sym_eigenvalues();
        lmax > 0.0 && lmin >= -slack * self.trace().abs()
    }

    /// [`Mat2::is_spd_within`] with a 1e-12 relative slack.
    pub fn is_spd(self) -> bool {
        self.is_spd_within(1e-12)
    }

    /// Closed-form inverse via the adjugate. Errors when the determinant
    /// magnitude is at or below [`SINGULARITY_THRESHOLD`] or not finite.
    pub fn inverse(self) -> Result<Mat2> {
        let det = self.det();
        if !det.is_finite() || det.abs() <= SINGULARITY_THRESHOLD {
            return Err(Error::Singular { det });
        }
        Ok(Mat2::new(
            self.m11 / det,
            -self.m01 / det,
            -self.m10 / det,
            self.m00 / det,
        ))
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.m00 + o.m00,
            self.m01 + o.m01,
            self.m10 + o.m10,
            self.m11 + o.m11,
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.m00 - o.m00,
            self.m01 - o.m01,
            self.m10 - o.m10,
            self.m11 - o.m11,
        )
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: f64) -> Mat2 {
        Mat2::new(self.m00 * s, self.m01 * s, self.m10 * s, self.m11 * s)
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.m00 * v.a0 + self.m01 * v.a1,
            self.m10 * v.a0 + self.m11 * v.a1,
        )
    }
}

impl Mul<Mat2> for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.m00 * o.m00 + self.m01 * o.m10,
            self.m00 * o.m01 + self.m01 * o.m11,
            self.m10 * o.m00 + self.m11 * o.m10,
            self.m10 * o.m01 + self.m11 * o.m11,
        )
    }
}

/// Gaussian belief as a mean and covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentPair {
    pub mean: Vec2,
    pub cov: Mat2,
}

/// The same belief in information form: `omega` is the inverse covariance and
/// `mu = omega * mean`, so fusing independent evidence becomes addition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoPair {
    pub omega: Mat2,
    pub mu: Vec2,
}

impl MomentPair {
    pub fn new(mean: Vec2, cov: Mat2) -> MomentPair {
        MomentPair { mean, cov }
    }

    pub fn to_information(self) -> Result<InfoPair> {
        let omega = self.cov.inverse()?.symmetrized();
        Ok(InfoPair {
            omega,
            mu: omega * self.mean,
        })
    }
}

impl InfoPair {
    pub fn new(omega: Mat2, mu: Vec2) -> InfoPair {
        InfoPair { omega, mu }
    }

    pub fn to_moments(self) -> Result<MomentPair> {
        let cov = self.omega.inverse()?.symmetrized();
        Ok(MomentPair {
            mean: cov * self.mu,
            cov,
        })
    }

    /// The mean this pair encodes, without materializing the covariance.
    pub fn mean(self) -> Result<Vec2> {
        Ok(self.omega.inverse()? * self.mu)
    }
}
