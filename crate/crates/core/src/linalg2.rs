//! 2×2 real matrices and the free/jump transfer matrices built from them.

use core::ops::Mul;

/// Below this value of `|α|·τ²` the trigonometric pair is evaluated by its
/// Taylor series, which is continuous through `α = 0`.
pub const SERIES_SWITCH: f64 = 1e-8;

/// Real 2×2 matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    /// Matrix whose columns are `c1` and `c2`.
    pub const fn from_columns(c1: [f64; 2], c2: [f64; 2]) -> Self {
        Mat2::new(c1[0], c2[0], c1[1], c2[1])
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.a11
            .abs()
            .max(self.a12.abs())
            .max(self.a21.abs())
            .max(self.a22.abs())
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }
}

impl Default for Mat2 {
    fn default() -> Self {
        Mat2::IDENTITY
    }
}

/// Row-by-column product `a · b`.
pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    Mat2::new(
        a.a11 * b.a11 + a.a12 * b.a21,
        a.a11 * b.a12 + a.a12 * b.a22,
        a.a21 * b.a11 + a.a22 * b.a21,
        a.a21 * b.a12 + a.a22 * b.a22,
    )
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        mat2_mul(&self, &rhs)
    }
}

impl Mul<&Mat2> for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        mat2_mul(self, rhs)
    }
}

/// The pair `C(α, τ)`, `S(α, τ)` solving `x'' + α x = 0` with unit initial
/// position (`C`) or unit initial velocity (`S`).
///
/// For `α > 0` these are `cos(√α τ)` and `sin(√α τ)/√α`; for `α < 0` the
/// hyperbolic counterparts; at `α = 0` they reduce to `1` and `τ`.
/// `C² + α S² = 1` for every `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigPair {
    pub c: f64,
    pub s: f64,
    pub alpha: f64,
    pub tau: f64,
}

pub fn trig_pair(alpha: f64, tau: f64) -> TrigPair {
    let x = alpha * tau * tau;
    let (c, s) = if x.abs() < SERIES_SWITCH {
        // truncation error is O(x³), far below f64 resolution here
        let c = 1.0 - x / 2.0 + x * x / 24.0;
        let s = tau * (1.0 - x / 6.0 + x * x / 120.0);
        (c, s)
    } else if alpha > 0.0 {
        let k = libm::sqrt(alpha);
        let (sin, cos) = libm::sincos(k * tau);
        (cos, sin / k)
    } else {
        let k = libm::sqrt(-alpha);
        (libm::cosh(k * tau), libm::sinh(k * tau) / k)
    };
    TrigPair { c, s, alpha, tau }
}

/// Propagator of `θ'' + α θ = 0` over a span `tau`:
/// `[[C, S], [−α S, C]]`.
pub fn free_transfer(alpha: f64, tau: f64) -> Mat2 {
    let TrigPair { c, s, .. } = trig_pair(alpha, tau);
    Mat2::new(c, s, -alpha * s, c)
}

/// Crossing an impulse `Γ δ(t − t₀)` keeps θ and kicks the velocity by `−Γ θ`.
pub fn jump_transfer(gamma: f64) -> Mat2 {
    Mat2::new(1.0, 0.0, -gamma, 1.0)
}
