use core::fmt;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `RectangularApprox(n)` needs `n >= 1` and a nonempty plateau (`1/n < π/2`).
    InvalidWaveform { n: u32 },
    /// A physical or dimensionless parameter violates its domain.
    InvalidParameter(&'static str),
    /// The operation needs an impulse decomposition, which the cosine wave lacks.
    NotImpulsive,
    /// Integrator configuration out of range.
    InvalidConfig(&'static str),
    /// Mollified pulses would overlap (`epsilon` must stay below a quarter of the smallest gap).
    OverlappingPulses { epsilon: f64, min_gap: f64 },
    /// Window bounds are not strictly ordered, or resolution too small.
    DegenerateWindow,
    /// State magnitude left the representable range.
    Overflow { t: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidWaveform { n } => {
                write!(f, "rectangular approximation needs 1/n < pi/2, got n = {n}")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::NotImpulsive => {
                f.write_str("cosine wave has no impulse decomposition; use the numeric method")
            }
            Error::InvalidConfig(what) => write!(f, "invalid integrator config: {what}"),
            Error::OverlappingPulses { epsilon, min_gap } => write!(
                f,
                "mollifier width {epsilon} is not below a quarter of the smallest impulse gap {min_gap}"
            ),
            Error::DegenerateWindow => f.write_str("degenerate window or resolution"),
            Error::Overflow { t } => write!(f, "state overflowed at t = {t}"),
        }
    }
}

impl core::error::Error for Error {}
