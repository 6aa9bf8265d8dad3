//! Pivot motions and the periodic coefficient they induce.
//!
//! Time is dimensionless (`t = Ω·t_phys`), so every waveform has period 2π.
//! A non-smooth pivot position has a distributional second derivative: each
//! kink in `ξ(t)` becomes a Dirac impulse in the coefficient of the
//! linearised equation.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result, PERIOD};

/// Pivot-motion family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Waveform {
    /// Piecewise-linear wave, `ξ(0) = A`, `ξ(π) = −A`.
    Triangular,
    /// Trapezoidal wave with ramps of half-width `1/n` around `t = 0` and `t = π`;
    /// tends to a rectangular wave as `n → ∞`.
    RectangularApprox(u32),
    /// `ξ = A cos t`; the linearised equation is the Mathieu equation.
    Cosine,
}

impl Waveform {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Waveform::RectangularApprox(n) if n == 0 || 1.0 / n as f64 >= PI / 2.0 => {
                Err(Error::InvalidWaveform { n })
            }
            _ => Ok(()),
        }
    }

    pub fn is_impulsive(&self) -> bool {
        !matches!(self, Waveform::Cosine)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Hanging down, `θ ≈ 0`.
    Pendent,
    /// Upright, `θ ≈ π`; linearising there flips the sign of `α`.
    Inverted,
}

/// Dimensional description of the rig. Mass cancels from the equation of motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Pivot amplitude.
    pub amplitude: f64,
    /// Pendulum length.
    pub length: f64,
    /// Gravitational acceleration.
    pub gravity: f64,
    /// Angular frequency of the pivot.
    pub omega: f64,
    pub orientation: Orientation,
}

/// A point `(α, β)` of the Ince–Strutt plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityParams {
    pub alpha: f64,
    pub beta: f64,
}

impl StabilityParams {
    pub const fn new(alpha: f64, beta: f64) -> Self {
        StabilityParams { alpha, beta }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(Error::InvalidParameter("alpha must be finite"));
        }
        if !self.beta.is_finite() {
            return Err(Error::InvalidParameter("beta must be finite"));
        }
        Ok(())
    }
}

/// Impulse `weight · δ(t − time)` in the coefficient of θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpulseEvent {
    pub time: f64,
    pub weight: f64,
}

/// Rectangular pulse of constant `height` on `[start, end)`, repeated with period 2π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub start: f64,
    pub end: f64,
    pub height: f64,
}

/// Bounded part of the periodic coefficient.
#[derive(Debug, Clone, PartialEq)]
pub enum SmoothCoefficient {
    /// `q(t) = amplitude · cos t`.
    Cosine { amplitude: f64 },
    /// Piecewise-constant train of pulses (mollified impulses).
    Pulses(Vec<Pulse>),
}

/// The periodic coefficient `q(t)` of `θ'' + (α + q(t)) θ = 0`.
///
/// Exactly one of `impulses` and `smooth` is populated. Impulse times lie in
/// `[t_start, t_start + 2π)` in increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientModel {
    pub t_start: f64,
    pub impulses: Vec<ImpulseEvent>,
    pub smooth: Option<SmoothCoefficient>,
}

impl CoefficientModel {
    pub fn is_impulsive(&self) -> bool {
        self.smooth.is_none()
    }

    /// Sum of impulse weights over one period.
    pub fn total_weight(&self) -> f64 {
        self.impulses.iter().map(|e| e.weight).sum()
    }

    /// Smallest cyclic distance between consecutive impulses.
    pub fn min_gap(&self) -> f64 {
        let n = self.impulses.len();
        if n < 2 {
            return PERIOD;
        }
        (0..n)
            .map(|i| {
                let next = if i + 1 < n {
                    self.impulses[i + 1].time
                } else {
                    self.impulses[0].time + PERIOD
                };
                next - self.impulses[i].time
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Impulses of the periodic extension with time in `[t0, t1)`, in time order.
    pub fn impulses_in(&self, t0: f64, t1: f64) -> Vec<ImpulseEvent> {
        let mut out = Vec::new();
        for_each_periodic(self.impulses.iter().map(|e| e.time), t0, t1, |i, t| {
            out.push(ImpulseEvent {
                time: t,
                weight: self.impulses[i].weight,
            });
        });
        out.sort_by(|a, b| a.time.total_cmp(&b.time));
        out
    }

    /// Times in the open interval `(t0, t1)` where the coefficient is not smooth:
    /// impulse times and mollified pulse edges. Sorted, deduplicated.
    pub fn breakpoints(&self, t0: f64, t1: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut push = |_: usize, t: f64| {
            if t > t0 {
                out.push(t);
            }
        };
        for_each_periodic(self.impulses.iter().map(|e| e.time), t0, t1, &mut push);
        if let Some(SmoothCoefficient::Pulses(pulses)) = &self.smooth {
            for_each_periodic(
                pulses.iter().flat_map(|p| [p.start, p.end]),
                t0,
                t1,
                &mut push,
            );
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Value of the smooth part at `t`; zero for pure impulse trains.
    pub fn smooth_value(&self, t: f64) -> f64 {
        match &self.smooth {
            None => 0.0,
            Some(SmoothCoefficient::Cosine { amplitude }) => amplitude * libm::cos(t),
            Some(SmoothCoefficient::Pulses(pulses)) => pulses
                .iter()
                .filter(|p| {
                    let r = p.start + libm::fmod(libm::fmod(t - p.start, PERIOD) + PERIOD, PERIOD);
                    r < p.end
                })
                .map(|p| p.height)
                .sum(),
        }
    }

    /// True when the smooth part is constant between breakpoints.
    pub fn is_piecewise_constant(&self) -> bool {
        !matches!(self.smooth, Some(SmoothCoefficient::Cosine { .. }))
    }
}

/// Calls `f(index, time)` for every periodic copy `time + 2πk` of the listed
/// base times falling in `[t0, t1)`.
fn for_each_periodic<I, F>(times: I, t0: f64, t1: f64, mut f: F)
where
    I: Iterator<Item = f64>,
    F: FnMut(usize, f64),
{
    for (i, base) in times.enumerate() {
        let k_lo = libm::floor((t0 - base) / PERIOD) as i64 - 1;
        let k_hi = libm::ceil((t1 - base) / PERIOD) as i64 + 1;
        for k in k_lo..=k_hi {
            let t = if k == 0 {
                base
            } else {
                base + k as f64 * PERIOD
            };
            if t >= t0 && t < t1 {
                f(i, t);
            }
        }
    }
}

/// Reduces `t` into `[lo, lo + 2π)`.
fn reduce(t: f64, lo: f64) -> f64 {
    let r = libm::fmod(t - lo, PERIOD);
    lo + if r < 0.0 { r + PERIOD } else { r }
}

/// Pivot position `ξ(t)` with the waveform's 2π-periodic extension.
pub fn pivot_position(w: Waveform, amplitude: f64, t: f64) -> f64 {
    match w {
        Waveform::Triangular => {
            let r = reduce(t, 0.0);
            if r <= PI {
                amplitude - 2.0 * amplitude / PI * r
            } else {
                -3.0 * amplitude + 2.0 * amplitude / PI * r
            }
        }
        Waveform::RectangularApprox(n) => {
            let n = n as f64;
            let h = 1.0 / n;
            let r = reduce(t, -h);
            if r <= h {
                n * amplitude * r
            } else if r < PI - h {
                amplitude
            } else if r <= PI + h {
                -n * amplitude * (r - PI)
            } else {
                -amplitude
            }
        }
        Waveform::Cosine => amplitude * libm::cos(t),
    }
}

/// Coefficient model of the linearised equation at `(α, β)`.
///
/// Triangular: kicks `−β` at `0` and `+β` at `π`. Rectangular approximation:
/// `+nβ, −nβ, −nβ, +nβ` at `−1/n, 1/n, π−1/n, π+1/n`. Cosine: `q(t) = β cos t`.
pub fn coefficient_model(w: Waveform, p: StabilityParams) -> Result<CoefficientModel> {
    w.validate()?;
    p.validate()?;
    let beta = p.beta;
    let model = match w {
        Waveform::Triangular => CoefficientModel {
            t_start: 0.0,
            impulses: alloc::vec![
                ImpulseEvent {
                    time: 0.0,
                    weight: -beta
                },
                ImpulseEvent {
                    time: PI,
                    weight: beta
                },
            ],
            smooth: None,
        },
        Waveform::RectangularApprox(n) => {
            let h = 1.0 / n as f64;
            let kick = n as f64 * beta;
            CoefficientModel {
                t_start: -h,
                impulses: alloc::vec![
                    ImpulseEvent {
                        time: -h,
                        weight: kick
                    },
                    ImpulseEvent {
                        time: h,
                        weight: -kick
                    },
                    ImpulseEvent {
                        time: PI - h,
                        weight: -kick
                    },
                    ImpulseEvent {
                        time: PI + h,
                        weight: kick
                    },
                ],
                smooth: None,
            }
        }
        Waveform::Cosine => CoefficientModel {
            t_start: 0.0,
            impulses: Vec::new(),
            smooth: Some(SmoothCoefficient::Cosine { amplitude: beta }),
        },
    };
    Ok(model)
}

/// Maps a physical rig to `(α, β)`.
///
/// `α = (g/l)/Ω²`, negated for the inverted pendulum. `β` is `4A/(πl)` for the
/// triangular wave, `A/l` for the rectangular approximation and `−A/l` for
/// the cosine wave.
pub fn params_from_physical(ph: &PhysicalParams, w: Waveform) -> Result<StabilityParams> {
    let finite = ph.amplitude.is_finite()
        && ph.length.is_finite()
        && ph.gravity.is_finite()
        && ph.omega.is_finite();
    if !finite {
        return Err(Error::InvalidParameter(
            "physical parameters must be finite",
        ));
    }
    if ph.length <= 0.0 {
        return Err(Error::InvalidParameter("length must be positive"));
    }
    if ph.gravity <= 0.0 {
        return Err(Error::InvalidParameter("gravity must be positive"));
    }
    if ph.omega <= 0.0 {
        return Err(Error::InvalidParameter("omega must be positive"));
    }
    if ph.amplitude < 0.0 {
        return Err(Error::InvalidParameter("amplitude must be nonnegative"));
    }
    w.validate()?;

    let natural = ph.gravity / ph.length;
    let alpha = match ph.orientation {
        Orientation::Pendent => natural / (ph.omega * ph.omega),
        Orientation::Inverted => -natural / (ph.omega * ph.omega),
    };
    let ratio = ph.amplitude / ph.length;
    let beta = match w {
        Waveform::Triangular => 4.0 * ratio / PI,
        Waveform::RectangularApprox(_) => ratio,
        Waveform::Cosine => -ratio,
    };
    Ok(StabilityParams { alpha, beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pivot_examples() {
        let a = 0.3;
        assert_eq!(pivot_position(Waveform::Triangular, a, 0.0), a);
        assert!((pivot_position(Waveform::Triangular, a, PI) + a).abs() < 1e-15);
        for n in [4, 100] {
            assert_eq!(
                pivot_position(Waveform::RectangularApprox(n), a, PI / 2.0),
                a
            );
        }
        assert!(pivot_position(Waveform::Cosine, a, PI / 2.0).abs() < 1e-16);
    }

    #[test]
    fn model_examples() {
        let m = coefficient_model(Waveform::Triangular, StabilityParams::new(1.0, 0.5)).unwrap();
        assert_eq!(m.t_start, 0.0);
        assert_eq!(
            m.impulses,
            [
                ImpulseEvent {
                    time: 0.0,
                    weight: -0.5
                },
                ImpulseEvent {
                    time: PI,
                    weight: 0.5
                }
            ]
        );

        let m = coefficient_model(
            Waveform::RectangularApprox(4),
            StabilityParams::new(1.0, 0.1),
        )
        .unwrap();
        let times: Vec<f64> = m.impulses.iter().map(|e| e.time).collect();
        let weights: Vec<f64> = m.impulses.iter().map(|e| e.weight).collect();
        assert_eq!(times, [-0.25, 0.25, PI - 0.25, PI + 0.25]);
        assert_eq!(weights, [0.4, -0.4, -0.4, 0.4]);
        assert_eq!(m.t_start, -0.25);

        let m = coefficient_model(Waveform::Cosine, StabilityParams::new(1.0, 0.0)).unwrap();
        assert!(m.impulses.is_empty());
        assert_eq!(m.smooth_value(0.3), 0.0);
    }

    #[test]
    fn rejects_empty_plateau() {
        assert_eq!(
            coefficient_model(
                Waveform::RectangularApprox(0),
                StabilityParams::new(1.0, 0.1)
            ),
            Err(Error::InvalidWaveform { n: 0 })
        );
        // 1/n = 1 < π/2 is still valid
        assert!(Waveform::RectangularApprox(1).validate().is_ok());
    }

    #[test]
    fn physical_mapping_examples() {
        let mut ph = PhysicalParams {
            amplitude: 0.0,
            length: 9.81,
            gravity: 9.81,
            omega: 2.0,
            orientation: Orientation::Pendent,
        };
        let p = params_from_physical(&ph, Waveform::Triangular).unwrap();
        assert_eq!((p.alpha, p.beta), (0.25, 0.0));

        ph.omega = 1.0;
        ph.amplitude = PI * 9.81 / 4.0;
        let p = params_from_physical(&ph, Waveform::Triangular).unwrap();
        assert!((p.alpha - 1.0).abs() < 1e-15 && (p.beta - 1.0).abs() < 1e-15);

        ph.orientation = Orientation::Inverted;
        let p = params_from_physical(&ph, Waveform::Triangular).unwrap();
        assert!((p.alpha + 1.0).abs() < 1e-15 && (p.beta - 1.0).abs() < 1e-15);

        let p = params_from_physical(&ph, Waveform::Cosine).unwrap();
        assert!((p.beta + ph.amplitude / ph.length).abs() < 1e-15);

        ph.length = 0.0;
        assert!(params_from_physical(&ph, Waveform::Cosine).is_err());
    }

    #[test]
    fn periodic_extension_of_impulses() {
        let m = coefficient_model(Waveform::Triangular, StabilityParams::new(1.0, 2.0)).unwrap();
        let ev = m.impulses_in(0.0, 2.0 * PERIOD);
        let times: Vec<f64> = ev.iter().map(|e| e.time).collect();
        assert_eq!(times, [0.0, PI, PERIOD, PI + PERIOD]);
        assert!(m.impulses_in(0.1, PI).is_empty());
        assert_eq!(m.breakpoints(0.0, PERIOD), [PI]);
    }

    proptest! {
        #[test]
        fn impulse_weights_have_zero_mean(n in 1u32..500, beta in -10.0f64..10.0) {
            for w in [Waveform::Triangular, Waveform::RectangularApprox(n)] {
                let m = coefficient_model(w, StabilityParams::new(0.5, beta)).unwrap();
                prop_assert_eq!(m.total_weight(), 0.0);
                prop_assert!(m.impulses.windows(2).all(|p| p[0].time < p[1].time));
                prop_assert!(m.impulses.iter().all(|e| e.time >= m.t_start && e.time < m.t_start + PERIOD));
            }
        }

        #[test]
        fn pivot_is_periodic_and_bounded(t in -20.0f64..20.0, n in 1u32..200, k in -3i32..3) {
            let a = 0.7;
            for w in [Waveform::Triangular, Waveform::RectangularApprox(n), Waveform::Cosine] {
                let x = pivot_position(w, a, t);
                let y = pivot_position(w, a, t + k as f64 * PERIOD);
                prop_assert!((x - y).abs() < 1e-9);
                prop_assert!(x.abs() <= a + 1e-12);
            }
        }

        #[test]
        fn pivot_is_continuous(t in -10.0f64..10.0, n in 1u32..50) {
            let a = 1.0;
            let h = 1e-9;
            for w in [Waveform::Triangular, Waveform::RectangularApprox(n), Waveform::Cosine] {
                let slope = match w { Waveform::RectangularApprox(n) => n as f64, _ => 1.0 };
                let jump = (pivot_position(w, a, t + h) - pivot_position(w, a, t)).abs();
                prop_assert!(jump <= 2.0 * slope * h + 1e-12);
            }
        }
    }
}
