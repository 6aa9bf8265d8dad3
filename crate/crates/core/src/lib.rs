//! Floquet stability analysis of a pendulum whose pivot oscillates vertically.
//!
//! The linearised equation of motion in dimensionless time is a Hill equation
//!
//! ```text
//! θ'' + (α + q(t)) θ = 0,      q(t + 2π) = q(t)
//! ```
//!
//! where `q` is the scaled pivot acceleration. For a triangular or an
//! approximated rectangular pivot motion the acceleration is a train of
//! Dirac impulses, so the monodromy matrix is an exact product of free
//! propagators and velocity kicks. For a cosine pivot (the Mathieu equation)
//! it is obtained numerically.
//!
//! Module map:
//!
//! - [`linalg2`]: 2×2 matrices and the sign-continued trigonometric pair.
//! - [`waveform`]: pivot motions, parameter mapping, impulse trains.
//! - [`monodromy`]: transfer-matrix products and closed-form traces.
//! - [`stability`]: classification, boundary curves, diagrams.
//! - [`numeric`]: event-aligned RK4 integrator used as an independent oracle.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![deny(rust_2018_idioms)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod linalg2;
pub mod monodromy;
pub mod numeric;
pub mod roots;
pub mod stability;
pub mod waveform;

pub use error::{Error, Result};
pub use linalg2::{free_transfer, jump_transfer, trig_pair, Mat2, TrigPair};
pub use monodromy::{
    monodromy_product, trace_rectangular_closed, trace_triangular_closed, Method, MonodromyResult,
};
pub use numeric::{
    integrate_linear, mollified_trace, monodromy_numeric, simulate_nonlinear, IntegratorConfig,
    State, Trajectory,
};
pub use stability::{
    boundary_rectangular, boundary_triangular, cell_trace, classify, diagram, identity_terms_a_b,
    stability_gap_negative, BoundaryCurve, BoundaryKind, DiagramGrid, Grid, IdentityTerms,
    Resolution, Stability, StabilityClass, Window,
};
pub use waveform::{
    coefficient_model, params_from_physical, pivot_position, CoefficientModel, ImpulseEvent,
    Orientation, PhysicalParams, StabilityParams, Waveform,
};

/// One period of the pivot motion in dimensionless time.
pub const PERIOD: f64 = 2.0 * core::f64::consts::PI;
