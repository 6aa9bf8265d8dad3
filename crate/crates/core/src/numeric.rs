//! Fixed-step RK4 integration with exact impulse events.
//!
//! Step endpoints are aligned with every impulse time and every mollified
//! pulse edge, so no step ever straddles a discontinuity of the coefficient.
//! At an impulse of weight `Γ` the position is kept and the velocity jumps by
//! `−Γ θ` (`−Γ sin θ` for the nonlinear pendulum).
//!
//! This module is deliberately independent of [`crate::monodromy`]: it never
//! uses the free/jump transfer matrices, which makes it usable as an oracle
//! for them.

use alloc::vec::Vec;

use crate::linalg2::Mat2;
use crate::monodromy::{Method, MonodromyResult};
use crate::waveform::{
    coefficient_model, CoefficientModel, ImpulseEvent, Pulse, SmoothCoefficient, StabilityParams,
    Waveform,
};
use crate::{Error, Result, PERIOD};

/// Phase-space state: angle and its derivative in dimensionless time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub theta: f64,
    pub omega: f64,
}

impl State {
    pub const fn new(theta: f64, omega: f64) -> Self {
        State { theta, omega }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Classical fourth-order Runge–Kutta.
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Nominal number of steps per 2π; each smooth segment gets
    /// `ceil(length / (2π / steps_per_period))` equal steps.
    pub steps_per_period: u32,
    pub method: Scheme,
    /// Replace every impulse by a rectangular pulse of this width.
    pub mollify_epsilon: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            steps_per_period: 4096,
            method: Scheme::Rk4,
            mollify_epsilon: None,
        }
    }
}

impl IntegratorConfig {
    pub fn with_steps(steps_per_period: u32) -> Self {
        IntegratorConfig {
            steps_per_period,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps_per_period < 16 {
            return Err(Error::InvalidConfig("steps_per_period must be at least 16"));
        }
        if let Some(eps) = self.mollify_epsilon {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidConfig("mollify_epsilon must be positive"));
            }
        }
        Ok(())
    }
}

/// Sampled solution. Each applied impulse contributes two samples with the
/// same time: the state just before and just after the kick.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(f64, State)>,
    pub events: Vec<ImpulseEvent>,
}

impl Trajectory {
    pub fn last(&self) -> Option<State> {
        self.samples.last().map(|&(_, s)| s)
    }

    pub fn max_abs_theta(&self) -> f64 {
        self.samples
            .iter()
            .fold(0.0, |m, (_, s)| m.max(s.theta.abs()))
    }
}

#[derive(Clone, Copy)]
enum Restoring {
    Linear,
    Sine,
}

impl Restoring {
    fn eval(self, theta: f64) -> f64 {
        match self {
            Restoring::Linear => theta,
            Restoring::Sine => libm::sin(theta),
        }
    }
}

struct Run<'a> {
    model: &'a CoefficientModel,
    alpha: f64,
    restoring: Restoring,
    h_nominal: f64,
}

impl Run<'_> {
    fn rk4(&self, t: f64, y: State, h: f64, q: &impl Fn(f64) -> f64) -> State {
        let f = |t: f64, th: f64, om: f64| (om, -(self.alpha + q(t)) * self.restoring.eval(th));
        let (k1t, k1o) = f(t, y.theta, y.omega);
        let (k2t, k2o) = f(
            t + 0.5 * h,
            y.theta + 0.5 * h * k1t,
            y.omega + 0.5 * h * k1o,
        );
        let (k3t, k3o) = f(
            t + 0.5 * h,
            y.theta + 0.5 * h * k2t,
            y.omega + 0.5 * h * k2o,
        );
        let (k4t, k4o) = f(t + h, y.theta + h * k3t, y.omega + h * k3o);
        State {
            theta: y.theta + h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t),
            omega: y.omega + h / 6.0 * (k1o + 2.0 * k2o + 2.0 * k3o + k4o),
        }
    }

    /// Integrates over `[t0, t1)`: impulses at `t0` are applied, impulses at `t1` are not.
    fn go(
        &self,
        y0: State,
        t0: f64,
        t1: f64,
        mut record: Option<&mut Trajectory>,
    ) -> Result<State> {
        let mut nodes = Vec::with_capacity(8);
        nodes.push(t0);
        nodes.extend(self.model.breakpoints(t0, t1));
        nodes.push(t1);
        let events = self.model.impulses_in(t0, t1);
        let mut next_event = 0;

        let mut y = y0;
        if let Some(tr) = record.as_deref_mut() {
            tr.samples.push((t0, y));
        }
        for seg in nodes.windows(2) {
            let (s, e) = (seg[0], seg[1]);
            while next_event < events.len() && events[next_event].time <= s {
                let ev = events[next_event];
                y.omega -= ev.weight * self.restoring.eval(y.theta);
                if let Some(tr) = record.as_deref_mut() {
                    tr.samples.push((s, y));
                    tr.events.push(ev);
                }
                next_event += 1;
            }
            let len = e - s;
            if len <= 0.0 {
                continue;
            }
            let m = libm::ceil(len / self.h_nominal - 1e-9).max(1.0) as u64;
            let h = len / m as f64;
            if self.model.is_piecewise_constant() {
                let c = self.model.smooth_value(s + 0.5 * len);
                for i in 0..m {
                    y = self.rk4(s + i as f64 * h, y, h, &|_| c);
                    self.check(y, s + (i + 1) as f64 * h)?;
                    if let Some(tr) = record.as_deref_mut() {
                        tr.samples.push((
                            if i + 1 == m {
                                e
                            } else {
                                s + (i + 1) as f64 * h
                            },
                            y,
                        ));
                    }
                }
            } else {
                let q = |t: f64| self.model.smooth_value(t);
                for i in 0..m {
                    y = self.rk4(s + i as f64 * h, y, h, &q);
                    self.check(y, s + (i + 1) as f64 * h)?;
                    if let Some(tr) = record.as_deref_mut() {
                        tr.samples.push((
                            if i + 1 == m {
                                e
                            } else {
                                s + (i + 1) as f64 * h
                            },
                            y,
                        ));
                    }
                }
            }
        }
        Ok(y)
    }

    fn check(&self, y: State, t: f64) -> Result<()> {
        if y.theta.is_finite()
            && y.omega.is_finite()
            && y.theta.abs() < 1e300
            && y.omega.abs() < 1e300
        {
            Ok(())
        } else {
            Err(Error::Overflow { t })
        }
    }
}

fn check_span(t_span: (f64, f64)) -> Result<()> {
    if !(t_span.0.is_finite() && t_span.1.is_finite() && t_span.0 <= t_span.1) {
        return Err(Error::InvalidParameter("t_span must be finite and ordered"));
    }
    Ok(())
}

/// Solves `θ'' + (α + q(t)) θ = 0` over `t_span` from `y0`.
pub fn integrate_linear(
    model: &CoefficientModel,
    alpha: f64,
    y0: State,
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    check_span(t_span)?;
    let run = Run {
        model,
        alpha,
        restoring: Restoring::Linear,
        h_nominal: PERIOD / cfg.steps_per_period as f64,
    };
    let mut tr = Trajectory::default();
    run.go(y0, t_span.0, t_span.1, Some(&mut tr))?;
    Ok(tr)
}

/// Period map of a coefficient model, starting at `model.t_start`.
pub fn period_map(model: &CoefficientModel, alpha: f64, cfg: &IntegratorConfig) -> Result<Mat2> {
    cfg.validate()?;
    let run = Run {
        model,
        alpha,
        restoring: Restoring::Linear,
        h_nominal: PERIOD / cfg.steps_per_period as f64,
    };
    let (t0, t1) = (model.t_start, model.t_start + PERIOD);
    let c1 = run.go(State::new(1.0, 0.0), t0, t1, None)?;
    let c2 = run.go(State::new(0.0, 1.0), t0, t1, None)?;
    Ok(Mat2::from_columns(
        [c1.theta, c1.omega],
        [c2.theta, c2.omega],
    ))
}

/// Replaces each impulse `Γ δ(t − t₀)` by a pulse of height `Γ/ε` on
/// `[t₀ − ε/2, t₀ + ε/2)`.
pub fn mollify(model: &CoefficientModel, epsilon: f64) -> Result<CoefficientModel> {
    if !model.is_impulsive() {
        return Err(Error::NotImpulsive);
    }
    let min_gap = model.min_gap();
    if !(epsilon > 0.0 && epsilon < min_gap / 4.0) {
        return Err(Error::OverlappingPulses { epsilon, min_gap });
    }
    let pulses = model
        .impulses
        .iter()
        .map(|ev| Pulse {
            start: ev.time - 0.5 * epsilon,
            end: ev.time + 0.5 * epsilon,
            height: ev.weight / epsilon,
        })
        .collect();
    Ok(CoefficientModel {
        t_start: model.t_start,
        impulses: Vec::new(),
        smooth: Some(SmoothCoefficient::Pulses(pulses)),
    })
}

/// Monodromy matrix by integrating the unit initial states over one period.
pub fn monodromy_numeric(
    w: Waveform,
    p: StabilityParams,
    cfg: &IntegratorConfig,
) -> Result<MonodromyResult> {
    let mut model = coefficient_model(w, p)?;
    if let Some(eps) = cfg.mollify_epsilon {
        model = mollify(&model, eps)?;
    }
    let matrix = period_map(&model, p.alpha, cfg)?;
    Ok(MonodromyResult {
        matrix: Some(matrix),
        trace: matrix.trace(),
        method: Method::Numeric,
    })
}

/// Trace of the monodromy with every impulse smeared over a width `epsilon`.
pub fn mollified_trace(
    w: Waveform,
    p: StabilityParams,
    epsilon: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    if !w.is_impulsive() {
        return Err(Error::NotImpulsive);
    }
    let cfg = IntegratorConfig {
        mollify_epsilon: Some(epsilon),
        ..*cfg
    };
    Ok(monodromy_numeric(w, p, &cfg)?.trace)
}

/// Full pendulum `θ'' + (α + q(t)) sin θ = 0` from the waveform's period
/// start to `t_start + t_end`; impulses kick the velocity by `−Γ sin θ`.
pub fn simulate_nonlinear(
    w: Waveform,
    p: StabilityParams,
    y0: State,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    simulate(w, p, y0, t_end, cfg, Restoring::Sine)
}

/// Linearised counterpart of [`simulate_nonlinear`] over the same span.
pub fn simulate_linear(
    w: Waveform,
    p: StabilityParams,
    y0: State,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    simulate(w, p, y0, t_end, cfg, Restoring::Linear)
}

fn simulate(
    w: Waveform,
    p: StabilityParams,
    y0: State,
    t_end: f64,
    cfg: &IntegratorConfig,
    restoring: Restoring,
) -> Result<Trajectory> {
    cfg.validate()?;
    let mut model = coefficient_model(w, p)?;
    if let Some(eps) = cfg.mollify_epsilon {
        model = mollify(&model, eps)?;
    }
    let t0 = model.t_start;
    check_span((t0, t0 + t_end))?;
    let run = Run {
        model: &model,
        alpha: p.alpha,
        restoring,
        h_nominal: PERIOD / cfg.steps_per_period as f64,
    };
    let mut tr = Trajectory::default();
    run.go(y0, t0, t0 + t_end, Some(&mut tr))?;
    Ok(tr)
}
