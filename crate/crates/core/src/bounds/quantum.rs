//! Bounds for the signed quantum queue `B(t) = A(t) - Q⁺(t)`: Chernoff tails
//! for arbitrary independent processes and two-sided distribution bands for
//! i.i.d. increments.

use super::classical::{check_delay, holder_conjugate};
use super::{require_positive_theta, upper_from_log, Band, Regime, Scenario};
use crate::error::{Error, Result};
use crate::processes::{Cgf, IncrementDistribution};

pub(crate) fn quantum_backlog_log(scn: &Scenario, x: f64, theta: f64) -> Result<f64> {
    scn.require_regime(Regime::Quantum)?;
    require_positive_theta(theta)?;
    let t = scn.horizon();
    Ok(scn.arrival().log_mgf(theta, t)? + scn.service().log_mgf(-theta, t)? - theta * x)
}

/// `Pr(B(t) > x) <= E[e^{θ A(t)}] E[e^{-θ Q⁺(t)}] e^{-θx}`.
pub fn quantum_backlog_tail_general(scn: &Scenario, x: f64, theta: f64) -> Result<f64> {
    Ok(upper_from_log(quantum_backlog_log(scn, x, theta)?))
}

pub(crate) fn quantum_delay_log(scn: &Scenario, d: f64, theta: f64, p: f64) -> Result<f64> {
    scn.require_regime(Regime::Quantum)?;
    require_positive_theta(theta)?;
    let d = check_delay(scn, d)?;
    let q = holder_conjugate(p)?;
    let t = scn.horizon();
    let joint = scn.arrival().log_mgf(theta * p, t)? + scn.service().log_mgf(-theta * p, t)?;
    let start = t - d as usize;
    let window = scn.arrival().log_mgf_suffixes(-theta * q, t)?[start];
    Ok(joint / p + window / q)
}

/// `Pr(D(t) > d) <= E[e^{θp(A(t) - Q⁺(t))}]^{1/p} E[e^{-θq A(t-d,t)}]^{1/q}`.
pub fn quantum_delay_tail_general(scn: &Scenario, d: f64, theta: f64, p: f64) -> Result<f64> {
    Ok(upper_from_log(quantum_delay_log(scn, d, theta, p)?))
}

pub(crate) fn quantum_throughput_log(scn: &Scenario, x: f64, theta: f64) -> Result<f64> {
    scn.require_regime(Regime::Quantum)?;
    require_positive_theta(theta)?;
    let t = scn.horizon();
    Ok(scn.arrival().log_mgf(theta, t)? + scn.service().log_mgf(theta, t)? - 2.0 * theta * x)
}

/// `Pr(A*(t) > x) <= E[e^{θ(Q⁺(t) + A(t))}] e^{-2θx}`, from `min(X,Y) <= (X+Y)/2`.
pub fn quantum_throughput_tail_general(scn: &Scenario, x: f64, theta: f64) -> Result<f64> {
    Ok(upper_from_log(quantum_throughput_log(scn, x, theta)?))
}

fn iid_parts(scn: &Scenario) -> Result<(&IncrementDistribution, &IncrementDistribution)> {
    scn.require_regime(Regime::Quantum)?;
    match (scn.arrival().as_iid(), scn.service().as_iid()) {
        (Some(a), Some(q)) => Ok((a, q)),
        _ => Err(Error::Precondition("band requires i.i.d. arrivals and i.i.d. capacity".into())),
    }
}

/// Log of the Chernoff term bounding `Pr(B(t) > x)`.
pub(crate) fn iid_backlog_lower_log(scn: &Scenario, x: f64, theta: f64) -> Result<f64> {
    require_positive_theta(theta)?;
    let (a, q) = iid_parts(scn)?;
    let t = scn.horizon() as f64;
    Ok((t * a.cgf(theta)? + t * q.cgf(-theta)?) - theta * x)
}

/// Log of the Chernoff term bounding `Pr(B(t) <= x)`.
pub(crate) fn iid_backlog_upper_log(scn: &Scenario, x: f64, theta: f64) -> Result<f64> {
    require_positive_theta(theta)?;
    let (a, q) = iid_parts(scn)?;
    let t = scn.horizon() as f64;
    Ok((t * a.cgf(-theta)? + t * q.cgf(theta)?) + theta * x)
}

pub(crate) fn iid_delay_lower_log(scn: &Scenario, d: f64, theta: f64) -> Result<f64> {
    require_positive_theta(theta)?;
    let d = check_delay(scn, d)?;
    let (a, q) = iid_parts(scn)?;
    let t = scn.horizon() as f64;
    Ok(t * q.cgf(-theta)? + (t - d) * a.cgf(theta)?)
}

pub(crate) fn iid_delay_upper_log(scn: &Scenario, d: f64, theta: f64) -> Result<f64> {
    require_positive_theta(theta)?;
    let d = check_delay(scn, d)?;
    let (a, q) = iid_parts(scn)?;
    let t = scn.horizon() as f64;
    Ok(t * q.cgf(theta)? + (t - d) * a.cgf(-theta)?)
}

/// `1 - e^{tκ(θ_l) - θ_l x} <= Pr(B(t) <= x) <= e^{tκ(-θ_u) + θ_u x}` with
/// `κ` the cumulant of `a - [Q]^+`.
pub fn quantum_iid_backlog_band(scn: &Scenario, x: f64, theta_upper: f64, theta_lower: f64) -> Result<Band> {
    Ok(Band::from_logs(
        iid_backlog_lower_log(scn, x, theta_lower)?,
        iid_backlog_upper_log(scn, x, theta_upper)?,
    ))
}

/// `1 - e^{tκ^Q(-θ) + (t-d)κ^A(θ)} <= Pr(D(t) <= d) <= e^{tκ^Q(θ) + (t-d)κ^A(-θ)}`.
pub fn quantum_iid_delay_band(scn: &Scenario, d: f64, theta_upper: f64, theta_lower: f64) -> Result<Band> {
    Ok(Band::from_logs(
        iid_delay_lower_log(scn, d, theta_lower)?,
        iid_delay_upper_log(scn, d, theta_upper)?,
    ))
}

/// One Chernoff piece of the throughput band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ThroughputPiece {
    /// Bounds `Pr(Q⁺(t) > x)`.
    CapacityTail,
    /// Bounds `Pr(A(t) > x)`.
    ArrivalTail,
    /// Bounds `Pr(Q⁺(t) <= x)`.
    CapacityCdf,
    /// Bounds `Pr(A(t) <= x)`.
    ArrivalCdf,
}

impl ThroughputPiece {
    pub(crate) const ALL: [ThroughputPiece; 4] = [
        ThroughputPiece::CapacityTail,
        ThroughputPiece::ArrivalTail,
        ThroughputPiece::CapacityCdf,
        ThroughputPiece::ArrivalCdf,
    ];
}

/// Free parameters of the four throughput pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputThetas {
    pub capacity_tail: f64,
    pub arrival_tail: f64,
    pub capacity_cdf: f64,
    pub arrival_cdf: f64,
}

impl ThroughputThetas {
    pub fn uniform(theta: f64) -> Self {
        Self {
            capacity_tail: theta,
            arrival_tail: theta,
            capacity_cdf: theta,
            arrival_cdf: theta,
        }
    }

    pub(crate) fn get(&self, piece: ThroughputPiece) -> f64 {
        match piece {
            ThroughputPiece::CapacityTail => self.capacity_tail,
            ThroughputPiece::ArrivalTail => self.arrival_tail,
            ThroughputPiece::CapacityCdf => self.capacity_cdf,
            ThroughputPiece::ArrivalCdf => self.arrival_cdf,
        }
    }
}

pub(crate) fn iid_throughput_piece_log(scn: &Scenario, piece: ThroughputPiece, x: f64, theta: f64) -> Result<f64> {
    require_positive_theta(theta)?;
    let (a, q) = iid_parts(scn)?;
    let t = scn.horizon() as f64;
    Ok(match piece {
        ThroughputPiece::CapacityTail => t * q.cgf(theta)? - theta * x,
        ThroughputPiece::ArrivalTail => t * a.cgf(theta)? - theta * x,
        ThroughputPiece::CapacityCdf => t * q.cgf(-theta)? + theta * x,
        ThroughputPiece::ArrivalCdf => t * a.cgf(-theta)? + theta * x,
    })
}

/// Unclamped `(lower, upper)` throughput expressions from the four piece
/// logs in [`ThroughputPiece::ALL`] order. Each piece is capped at 1 first.
pub(crate) fn assemble_throughput(logs: [f64; 4]) -> (f64, f64) {
    let [uq, ua, lq, la] = logs.map(upper_from_log);
    let lower = 2.0 - uq - ua - lq * la;
    let upper = lq + la - (1.0 - uq) * (1.0 - ua);
    (lower, upper)
}

pub(crate) fn throughput_band(logs: [f64; 4]) -> Band {
    let (lower, upper) = assemble_throughput(logs);
    Band {
        lower: lower.clamp(0.0, 1.0),
        upper: upper.clamp(0.0, 1.0),
    }
}

/// Four-piece band on `Pr(A*(t) <= x)` with one θ for every piece.
pub fn quantum_iid_throughput_band(scn: &Scenario, x: f64, theta: f64) -> Result<Band> {
    quantum_iid_throughput_band_split(scn, x, ThroughputThetas::uniform(theta))
}

/// Four-piece band on `Pr(A*(t) <= x)` with a separate θ per piece.
pub fn quantum_iid_throughput_band_split(scn: &Scenario, x: f64, thetas: ThroughputThetas) -> Result<Band> {
    let mut logs = [0.0; 4];
    for (l, piece) in logs.iter_mut().zip(ThroughputPiece::ALL) {
        *l = iid_throughput_piece_log(scn, piece, x, thetas.get(piece))?;
    }
    Ok(throughput_band(logs))
}
