//! Analytic tail and distribution bounds on backlog, delay and throughput.
//!
//! Every bound is a Chernoff-type expression with a free parameter `θ > 0`
//! (and a Hölder exponent `p` for the generic delay bounds). The fixed-θ
//! functions evaluate one expression; [`curves`] sweeps an argument grid and
//! optimises the free parameters per point.
//!
//! Time convention: slot increments live on slots `1..=t`; `A(s,t)` sums slots
//! `s+1..=t`, so `A(t,t) = 0` and `A(0,t) = A(t)` has `t` terms.

mod classical;
pub mod curves;
pub use curves::{band_curves, band_family, band_quantile, lundberg_curve, lundberg_for, tail_curve, BandCurves, BandFamily};
mod markov;
mod optimize;
mod quantum;

pub use classical::{
    classical_backlog_tail_general, classical_delay_tail_general, classical_throughput_tail_general,
    iid_lundberg_bound, lundberg_root, map_lundberg_arrival_side, map_lundberg_bound, map_lundberg_capacity_side,
    map_throughput_bound, map_throughput_bound_capacity_side, LundbergBound, LUNDBERG_TOL,
};
pub use markov::{
    quantum_map_backlog_band, quantum_map_bands, quantum_map_constant_backlog_band, quantum_map_constant_bands,
    quantum_map_constant_delay_band, quantum_map_delay_band, quantum_map_throughput_band,
};
pub use optimize::{optimize_theta, ThetaGrid, DEFAULT_HOLDER_GRID};
pub use quantum::{
    quantum_backlog_tail_general, quantum_delay_tail_general, quantum_iid_backlog_band, quantum_iid_delay_band,
    quantum_iid_throughput_band, quantum_iid_throughput_band_split, quantum_throughput_tail_general, ThroughputThetas,
};

use crate::error::{Error, Result};
use crate::processes::Process;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Backlog,
    Delay,
    Throughput,
}

impl Measure {
    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Backlog => "backlog",
            Measure::Delay => "delay",
            Measure::Throughput => "throughput",
        }
    }

    pub const ALL: [Measure; 3] = [Measure::Backlog, Measure::Delay, Measure::Throughput];
}

impl std::str::FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "backlog" => Ok(Measure::Backlog),
            "delay" => Ok(Measure::Delay),
            "throughput" => Ok(Measure::Throughput),
            other => Err(format!("unknown measure `{other}`")),
        }
    }
}

/// Which probability a curve bounds, and from which side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Upper bound on `Pr(X > x)`.
    UpperOnTail,
    /// Upper bound on `Pr(X <= x)`.
    UpperOnCdf,
    /// Lower bound on `Pr(X <= x)`.
    LowerOnCdf,
    /// Pointwise mean of the clamped lower and upper CDF bounds.
    Median,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::UpperOnTail => "upper_on_tail",
            Side::UpperOnCdf => "upper_on_cdf",
            Side::LowerOnCdf => "lower_on_cdf",
            Side::Median => "median",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPoint {
    pub argument: f64,
    /// Bound value clamped to `[0, 1]`.
    pub value: f64,
    /// Optimised free parameter; `None` for derived curves such as the median.
    pub theta: Option<f64>,
    pub p: Option<f64>,
    /// The unclamped expression carried no information (above 1 for an
    /// upper bound, at or below 0 for a lower bound).
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub measure: Measure,
    pub side: Side,
    pub scenario: String,
    pub points: Vec<BoundPoint>,
}

impl BoundCurve {
    /// Linear interpolation of the bound at `x` (clamped to the grid ends).
    pub fn value_at(&self, x: f64) -> Option<f64> {
        let pts = &self.points;
        let first = pts.first()?;
        if x <= first.argument {
            return Some(first.value);
        }
        for w in pts.windows(2) {
            if x <= w[1].argument {
                let span = w[1].argument - w[0].argument;
                let f = if span > 0.0 { (x - w[0].argument) / span } else { 1.0 };
                return Some(w[0].value + f * (w[1].value - w[0].value));
            }
        }
        pts.last().map(|p| p.value)
    }
}

/// Lower and upper bound on a distribution function at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lower: f64,
    pub upper: f64,
}

impl Band {
    pub(crate) fn from_logs(lower_excess_log: f64, upper_log: f64) -> Self {
        Band {
            lower: lower_from_log(lower_excess_log),
            upper: upper_from_log(upper_log),
        }
    }

    pub fn median(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// `min(1, e^l)`; NaN is treated as vacuous.
pub(crate) fn upper_from_log(l: f64) -> f64 {
    if l.is_nan() || l >= 0.0 {
        1.0
    } else {
        l.exp()
    }
}

/// `max(0, 1 - e^l)`.
pub(crate) fn lower_from_log(l: f64) -> f64 {
    if l.is_nan() || l >= 0.0 {
        0.0
    } else {
        -l.exp_m1()
    }
}

pub(crate) fn require_positive_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("θ must be positive and finite, got {theta}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Reflected queue `B(t+1) = [B(t) + a - C]^+`.
    Classical,
    /// Signed queue `B(t+1) = B(t) + a - [Q]^+`.
    Quantum,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Classical => "classical",
            Regime::Quantum => "quantum",
        }
    }
}

/// An arrival process, a capacity process, a horizon and a queue regime.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    label: String,
    arrival: Process,
    capacity: Process,
    service: Process,
    horizon: usize,
    regime: Regime,
}

impl Scenario {
    pub fn new(
        label: impl Into<String>,
        arrival: Process,
        capacity: Process,
        horizon: usize,
        regime: Regime,
    ) -> Result<Self> {
        if arrival.support_min() < 0.0 {
            return Err(Error::Precondition("arrivals must be nonnegative".into()));
        }
        let service = match regime {
            Regime::Classical => {
                if capacity.support_min() < 0.0 {
                    return Err(Error::Precondition("classical capacity must be nonnegative".into()));
                }
                capacity.clone()
            }
            Regime::Quantum => capacity.clipped_positive()?,
        };
        Ok(Self {
            label: label.into(),
            arrival,
            capacity,
            service,
            horizon,
            regime,
        })
    }

    pub fn quantum(arrival: Process, capacity: Process, horizon: usize) -> Result<Self> {
        Self::new("quantum", arrival, capacity, horizon, Regime::Quantum)
    }

    pub fn classical(arrival: Process, capacity: Process, horizon: usize) -> Result<Self> {
        Self::new("classical", arrival, capacity, horizon, Regime::Classical)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn arrival(&self) -> &Process {
        &self.arrival
    }

    /// Raw capacity process (may be negative in the quantum regime).
    pub fn capacity(&self) -> &Process {
        &self.capacity
    }

    /// Capacity as seen by the queue: `[Q]^+` in the quantum regime.
    pub fn service(&self) -> &Process {
        &self.service
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn with_horizon(&self, horizon: usize) -> Self {
        let mut s = self.clone();
        s.horizon = horizon;
        s
    }

    pub(crate) fn require_regime(&self, regime: Regime) -> Result<()> {
        if self.regime == regime {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "bound requires the {} regime, scenario is {}",
                regime.as_str(),
                self.regime.as_str()
            )))
        }
    }
}
