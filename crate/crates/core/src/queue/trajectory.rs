use crate::bounds::Regime;
use crate::error::{Error, Result};

/// `max(B + a - c, 0)`.
pub fn step_classical(backlog: f64, arrival: f64, capacity: f64) -> f64 {
    (backlog + arrival - capacity).max(0.0)
}

/// `B + a - [q]^+`; the backlog may go negative.
pub fn step_quantum(backlog: f64, arrival: f64, capacity: f64) -> f64 {
    backlog + arrival - capacity.max(0.0)
}

/// Smallest `d` with `A(t-d) <= output`, where `cumulative[s] = A(s)` is
/// nondecreasing and `cumulative[0] = 0`.
pub fn delay_from_cumulative(cumulative: &[f64], output: f64) -> usize {
    let t = cumulative.len() - 1;
    // Number of s in 0..=t with A(s) <= output; A(0) = 0 keeps it >= 1 for output >= 0.
    let count = cumulative.partition_point(|&a| a <= output);
    t + 1 - count.max(1)
}

/// One sample path of the queue over slots `0..=t`.
#[derive(Debug, Clone, PartialEq)]
pub struct QueueTrajectory {
    regime: Regime,
    arrivals: Vec<f64>,
    capacities: Vec<f64>,
    cumulative_arrivals: Vec<f64>,
    cumulative_service: Vec<f64>,
    backlog: Vec<f64>,
    output: Vec<f64>,
}

impl QueueTrajectory {
    /// `arrivals[i]` and `capacities[i]` are the increments of slot `i + 1`.
    /// Capacities are raw (possibly negative) in the quantum regime.
    pub fn new(regime: Regime, arrivals: Vec<f64>, capacities: Vec<f64>) -> Result<Self> {
        if arrivals.len() != capacities.len() {
            return Err(Error::Precondition(format!(
                "{} arrival slots but {} capacity slots",
                arrivals.len(),
                capacities.len()
            )));
        }
        if arrivals.iter().any(|&a| !(a >= 0.0) || !a.is_finite()) {
            return Err(Error::Precondition("arrivals must be finite and nonnegative".into()));
        }
        if capacities.iter().any(|c| !c.is_finite()) {
            return Err(Error::Precondition("capacities must be finite".into()));
        }
        if regime == Regime::Classical && capacities.iter().any(|&c| c < 0.0) {
            return Err(Error::Precondition("classical capacity must be nonnegative".into()));
        }
        let n = arrivals.len();
        let mut cumulative_arrivals = Vec::with_capacity(n + 1);
        let mut cumulative_service = Vec::with_capacity(n + 1);
        let mut backlog = Vec::with_capacity(n + 1);
        let (mut a, mut s, mut b) = (0.0, 0.0, 0.0);
        cumulative_arrivals.push(a);
        cumulative_service.push(s);
        backlog.push(b);
        for (&ai, &ci) in arrivals.iter().zip(&capacities) {
            a += ai;
            b = match regime {
                Regime::Classical => {
                    s += ci;
                    step_classical(b, ai, ci)
                }
                Regime::Quantum => {
                    s += ci.max(0.0);
                    step_quantum(b, ai, ci)
                }
            };
            cumulative_arrivals.push(a);
            cumulative_service.push(s);
            backlog.push(b);
        }
        let output = match regime {
            Regime::Classical => cumulative_arrivals.iter().zip(&backlog).map(|(a, b)| a - b).collect(),
            Regime::Quantum => cumulative_arrivals
                .iter()
                .zip(&cumulative_service)
                .map(|(a, s)| a.min(*s))
                .collect(),
        };
        Ok(Self {
            regime,
            arrivals,
            capacities,
            cumulative_arrivals,
            cumulative_service,
            backlog,
            output,
        })
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn horizon(&self) -> usize {
        self.arrivals.len()
    }

    pub fn arrivals(&self) -> &[f64] {
        &self.arrivals
    }

    pub fn capacities(&self) -> &[f64] {
        &self.capacities
    }

    /// `A(0..=t)`.
    pub fn cumulative_arrivals(&self) -> &[f64] {
        &self.cumulative_arrivals
    }

    /// `S(0..=t)`, or `Q⁺(0..=t)` in the quantum regime.
    pub fn cumulative_service(&self) -> &[f64] {
        &self.cumulative_service
    }

    /// `B(0..=t)` from the step recursion.
    pub fn backlog(&self) -> &[f64] {
        &self.backlog
    }

    /// `A*(0..=t)`: `A - B` (classical) or `min(Q⁺, A)` (quantum).
    pub fn output(&self) -> &[f64] {
        &self.output
    }

    /// `sup_{0<=s<=t} (A(s,t) - S(s,t))` by brute force.
    pub fn classical_sup_backlog(&self, t: usize) -> f64 {
        let (a, s) = (&self.cumulative_arrivals, &self.cumulative_service);
        (0..=t).map(|k| (a[t] - a[k]) - (s[t] - s[k])).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `inf_{0<=s<=t} (A(0,s) + S(s,t))` for every `t`, by brute force.
    pub fn classical_output(&self) -> Vec<f64> {
        let (a, s) = (&self.cumulative_arrivals, &self.cumulative_service);
        (0..a.len())
            .map(|t| (0..=t).map(|k| a[k] + (s[t] - s[k])).fold(f64::INFINITY, f64::min))
            .collect()
    }

    /// `min(Q⁺(t), A(t))` for every `t`.
    pub fn quantum_output(&self) -> Vec<f64> {
        self.cumulative_arrivals
            .iter()
            .zip(&self.cumulative_service)
            .map(|(a, s)| a.min(*s))
            .collect()
    }

    /// `D(t) = min{d >= 0 : A(t-d) <= A*(t)}`, scanning `d` upward.
    pub fn virtual_delay(&self, t: usize) -> Result<usize> {
        if t > self.horizon() {
            return Err(Error::IndexOutOfRange {
                index: t,
                len: self.horizon() + 1,
            });
        }
        let a = &self.cumulative_arrivals;
        let out = self.output[t];
        Ok((0..=t).find(|&d| a[t - d] <= out).unwrap_or(t))
    }

    pub fn delays(&self) -> Vec<usize> {
        (0..=self.horizon())
            .map(|t| delay_from_cumulative(&self.cumulative_arrivals[..=t], self.output[t]))
            .collect()
    }
}
