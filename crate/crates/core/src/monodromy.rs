//! Monodromy matrices of the impulsive waveforms.
//!
//! Between impulses the solution evolves freely, across an impulse only the
//! velocity jumps, so the period map is a finite product of
//! [`free_transfer`] and [`jump_transfer`] factors. The closed-form traces
//! below are that product multiplied out symbolically and written in terms of
//! the continued pair `(C, S)` from [`trig_pair`], which covers `α < 0`,
//! `α = 0` and `α > 0` with one expression.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg2::{free_transfer, jump_transfer, trig_pair, Mat2};
use crate::waveform::{coefficient_model, CoefficientModel, StabilityParams, Waveform};
use crate::{Error, Result, PERIOD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Product,
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyResult {
    /// `None` for closed-form traces, which do not assemble the matrix.
    pub matrix: Option<Mat2>,
    pub trace: f64,
    pub method: Method,
}

/// Transfer factors over one period starting at `model.t_start` (just before
/// any impulse located there), in time order. The period map is the product
/// of these with later factors on the left.
pub fn transfer_factors(model: &CoefficientModel, alpha: f64) -> Result<Vec<Mat2>> {
    if !model.is_impulsive() {
        return Err(Error::NotImpulsive);
    }
    let mut factors = Vec::with_capacity(2 * model.impulses.len() + 1);
    let mut t = model.t_start;
    for ev in &model.impulses {
        if ev.time > t {
            factors.push(free_transfer(alpha, ev.time - t));
        }
        factors.push(jump_transfer(ev.weight));
        t = ev.time;
    }
    factors.push(free_transfer(alpha, model.t_start + PERIOD - t));
    Ok(factors)
}

/// Product of the factors, first factor applied first.
pub fn compose(factors: &[Mat2]) -> Mat2 {
    factors.iter().fold(Mat2::IDENTITY, |acc, f| f * &acc)
}

/// Monodromy matrix as an exact product of free and jump propagators.
///
/// Triangular: `F(π)·J(β)·F(π)·J(−β)`. Rectangular approximation: eight
/// factors with free spans alternating between `2/n` and `π − 2/n`.
pub fn monodromy_product(w: Waveform, p: StabilityParams) -> Result<MonodromyResult> {
    if !w.is_impulsive() {
        return Err(Error::NotImpulsive);
    }
    let model = coefficient_model(w, p)?;
    let matrix = compose(&transfer_factors(&model, p.alpha)?);
    Ok(MonodromyResult {
        matrix: Some(matrix),
        trace: matrix.trace(),
        method: Method::Product,
    })
}

/// `Tr E = 2 cos(2π√α) − (β²/α) sin²(π√α)` for the triangular wave.
///
/// Written as `2 C(α, 2π) − β² S(α, π)²`, which continues to
/// `2 cosh(2π√|α|) − (β²/|α|) sinh²(π√|α|)` for `α < 0` and to `2 − π²β²`
/// at `α = 0`.
pub fn trace_triangular_closed(p: StabilityParams) -> f64 {
    let full = trig_pair(p.alpha, PERIOD);
    let half = trig_pair(p.alpha, PI);
    2.0 * full.c - p.beta * p.beta * half.s * half.s
}

/// Closed-form trace for the rectangular approximation of order `n`.
///
/// With `γ = nβ`, ramp span `a = 2/n` and plateau span `b = π − 2/n`:
///
/// ```text
/// Tr E = 2 C(2π) − 4γ² S(a) C(b) S(π) + γ⁴ S(a)² S(b)²
/// ```
///
/// The `γ⁴` coefficient times `8α²` is the nonnegative bracket
/// `2[1 − cos(4√α/n)][1 − cos(2π√α − 4√α/n)]`.
pub fn trace_rectangular_closed(p: StabilityParams, n: u32) -> Result<f64> {
    Waveform::RectangularApprox(n).validate()?;
    let n = n as f64;
    let gamma2 = (n * p.beta) * (n * p.beta);
    let ramp = trig_pair(p.alpha, 2.0 / n);
    let plateau = trig_pair(p.alpha, PI - 2.0 / n);
    let full = trig_pair(p.alpha, PERIOD);
    let half = trig_pair(p.alpha, PI);
    let quad = ramp.s * plateau.s;
    Ok(2.0 * full.c - 4.0 * gamma2 * ramp.s * plateau.c * half.s + gamma2 * gamma2 * quad * quad)
}

/// Closed-form trace of an impulsive waveform.
pub fn closed_form(w: Waveform, p: StabilityParams) -> Result<MonodromyResult> {
    p.validate()?;
    let trace = match w {
        Waveform::Triangular => trace_triangular_closed(p),
        Waveform::RectangularApprox(n) => trace_rectangular_closed(p, n)?,
        Waveform::Cosine => return Err(Error::NotImpulsive),
    };
    Ok(MonodromyResult {
        matrix: None,
        trace,
        method: Method::ClosedForm,
    })
}
