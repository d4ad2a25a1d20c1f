//! Bound curves over an argument grid, with the free parameters optimised
//! separately at every point.

use super::classical::{
    classical_backlog_log, classical_delay_log, classical_throughput_log, iid_lundberg_bound, map_lundberg_arrival_side,
    map_lundberg_capacity_side, map_throughput_bound, map_throughput_bound_capacity_side, LundbergBound,
};
use super::markov::{ConstantModel, MapModel};
use super::optimize::{optimize_theta, ThetaGrid};
use super::quantum::{
    assemble_throughput, iid_backlog_lower_log, iid_backlog_upper_log, iid_delay_lower_log, iid_delay_upper_log,
    iid_throughput_piece_log, quantum_backlog_log, quantum_delay_log, quantum_throughput_log, ThroughputPiece,
};
use super::{lower_from_log, upper_from_log, BoundCurve, BoundPoint, Measure, Regime, Scenario, Side};
use crate::error::{Error, Result};
use crate::processes::{MapKernel, Process};

/// Which band expressions apply to a quantum scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandFamily {
    /// Both sides i.i.d.
    Iid,
    /// One side is a constant rate, the other Markov additive.
    ConstantSide,
    /// Both sides Markov additive.
    Markov,
}

pub fn band_family(scn: &Scenario) -> BandFamily {
    if scn.arrival().as_iid().is_some() && scn.service().as_iid().is_some() {
        BandFamily::Iid
    } else if scn.arrival().as_constant().is_some() || scn.service().as_constant().is_some() {
        BandFamily::ConstantSide
    } else {
        BandFamily::Markov
    }
}

#[allow(clippy::large_enum_variant)]
enum Evaluator<'a> {
    Iid(&'a Scenario),
    Constant(ConstantModel, MapModel),
    Markov(MapModel),
}

impl<'a> Evaluator<'a> {
    fn new(scn: &'a Scenario) -> Result<Self> {
        scn.require_regime(Regime::Quantum)?;
        Ok(match band_family(scn) {
            BandFamily::Iid => Evaluator::Iid(scn),
            BandFamily::ConstantSide => Evaluator::Constant(ConstantModel::new(scn)?, MapModel::new(scn)?),
            BandFamily::Markov => Evaluator::Markov(MapModel::new(scn)?),
        })
    }

    fn lower_log(&self, measure: Measure, arg: f64, theta: f64) -> Result<f64> {
        match (self, measure) {
            (Evaluator::Iid(s), Measure::Backlog) => iid_backlog_lower_log(s, arg, theta),
            (Evaluator::Iid(s), Measure::Delay) => iid_delay_lower_log(s, arg, theta),
            (Evaluator::Constant(c, _), Measure::Backlog) => c.backlog_lower_log(arg, theta),
            (Evaluator::Constant(c, _), Measure::Delay) => c.delay_lower_log(arg, theta),
            (Evaluator::Markov(m), Measure::Backlog) => m.backlog_lower_log(arg, theta),
            (Evaluator::Markov(m), Measure::Delay) => m.delay_lower_log(arg, theta),
            (_, Measure::Throughput) => unreachable!("throughput is assembled from pieces"),
        }
    }

    fn upper_log(&self, measure: Measure, arg: f64, theta: f64) -> Result<f64> {
        match (self, measure) {
            (Evaluator::Iid(s), Measure::Backlog) => iid_backlog_upper_log(s, arg, theta),
            (Evaluator::Iid(s), Measure::Delay) => iid_delay_upper_log(s, arg, theta),
            (Evaluator::Constant(c, _), Measure::Backlog) => c.backlog_upper_log(arg, theta),
            (Evaluator::Constant(c, _), Measure::Delay) => c.delay_upper_log(arg, theta),
            (Evaluator::Markov(m), Measure::Backlog) => m.backlog_upper_log(arg, theta),
            (Evaluator::Markov(m), Measure::Delay) => m.delay_upper_log(arg, theta),
            (_, Measure::Throughput) => unreachable!("throughput is assembled from pieces"),
        }
    }

    fn piece_log(&self, piece: ThroughputPiece, x: f64, theta: f64) -> Result<f64> {
        match self {
            Evaluator::Iid(s) => iid_throughput_piece_log(s, piece, x, theta),
            Evaluator::Constant(_, m) | Evaluator::Markov(m) => m.throughput_piece_log(piece, x, theta),
        }
    }
}

/// Lower, upper and median CDF curves of one measure.
#[derive(Debug, Clone, PartialEq)]
pub struct BandCurves {
    pub lower: BoundCurve,
    pub upper: BoundCurve,
    pub median: BoundCurve,
}

fn curve(scn: &Scenario, measure: Measure, side: Side, points: Vec<BoundPoint>) -> BoundCurve {
    BoundCurve {
        measure,
        side,
        scenario: scn.label().to_string(),
        points,
    }
}

/// Optimised bands on `Pr(X <= x)` for a quantum scenario. Backlog and delay
/// use the i.i.d., constant-side or Markov additive expressions according to
/// [`band_family`]; throughput optimises each of its four pieces on its own.
pub fn band_curves(scn: &Scenario, measure: Measure, arguments: &[f64], grid: &ThetaGrid) -> Result<BandCurves> {
    grid.validate()?;
    let eval = Evaluator::new(scn)?;
    let mut lower = Vec::with_capacity(arguments.len());
    let mut upper = Vec::with_capacity(arguments.len());
    for &arg in arguments {
        let (lo, up) = if measure == Measure::Throughput {
            let mut logs = [0.0; 4];
            let mut thetas = [0.0; 4];
            for (i, piece) in ThroughputPiece::ALL.into_iter().enumerate() {
                let (th, l) = optimize_theta(|th| eval.piece_log(piece, arg, th), grid)?;
                logs[i] = l;
                thetas[i] = th;
            }
            let (lo, up) = assemble_throughput(logs);
            (
                BoundPoint {
                    argument: arg,
                    value: lo.clamp(0.0, 1.0),
                    theta: Some(thetas[1]),
                    p: None,
                    vacuous: lo <= 0.0,
                },
                BoundPoint {
                    argument: arg,
                    value: up.clamp(0.0, 1.0),
                    theta: Some(thetas[3]),
                    p: None,
                    vacuous: up >= 1.0,
                },
            )
        } else {
            let (tl, l) = optimize_theta(|th| eval.lower_log(measure, arg, th), grid)?;
            let (tu, u) = optimize_theta(|th| eval.upper_log(measure, arg, th), grid)?;
            (
                BoundPoint {
                    argument: arg,
                    value: lower_from_log(l),
                    theta: Some(tl),
                    p: None,
                    vacuous: !(l < 0.0),
                },
                BoundPoint {
                    argument: arg,
                    value: upper_from_log(u),
                    theta: Some(tu),
                    p: None,
                    vacuous: !(u < 0.0),
                },
            )
        };
        lower.push(lo);
        upper.push(up);
    }
    let median = lower
        .iter()
        .zip(&upper)
        .map(|(l, u)| BoundPoint {
            argument: l.argument,
            value: 0.5 * (l.value + u.value),
            theta: None,
            p: None,
            vacuous: l.vacuous && u.vacuous,
        })
        .collect();
    Ok(BandCurves {
        lower: curve(scn, measure, Side::LowerOnCdf, lower),
        upper: curve(scn, measure, Side::UpperOnCdf, upper),
        median: curve(scn, measure, Side::Median, median),
    })
}

/// Optimised transient tail bound `Pr(X > x)` valid for any independent
/// arrival and capacity processes, in either regime. Delay additionally
/// picks the best Hölder exponent from `holder_grid`.
pub fn tail_curve(
    scn: &Scenario,
    measure: Measure,
    arguments: &[f64],
    grid: &ThetaGrid,
    holder_grid: &[f64],
) -> Result<BoundCurve> {
    grid.validate()?;
    if measure == Measure::Delay && holder_grid.is_empty() {
        return Err(Error::domain("empty Hölder exponent grid"));
    }
    let classical = scn.regime() == Regime::Classical;
    let mut points = Vec::with_capacity(arguments.len());
    for &arg in arguments {
        let (theta, log, p) = match measure {
            Measure::Backlog => {
                let (th, l) = optimize_theta(
                    |th| {
                        if classical {
                            classical_backlog_log(scn, arg, th)
                        } else {
                            quantum_backlog_log(scn, arg, th)
                        }
                    },
                    grid,
                )?;
                (th, l, None)
            }
            Measure::Throughput => {
                let (th, l) = optimize_theta(
                    |th| {
                        if classical {
                            classical_throughput_log(scn, arg, th)
                        } else {
                            quantum_throughput_log(scn, arg, th)
                        }
                    },
                    grid,
                )?;
                (th, l, None)
            }
            Measure::Delay => {
                let mut best = (f64::NAN, f64::INFINITY, None);
                for &p in holder_grid {
                    let (th, l) = optimize_theta(
                        |th| {
                            if classical {
                                classical_delay_log(scn, arg, th, p)
                            } else {
                                quantum_delay_log(scn, arg, th, p)
                            }
                        },
                        grid,
                    )?;
                    if l < best.1 {
                        best = (th, l, Some(p));
                    }
                }
                best
            }
        };
        points.push(BoundPoint {
            argument: arg,
            value: upper_from_log(log),
            theta: Some(theta),
            p,
            vacuous: !(log < 0.0),
        });
    }
    Ok(curve(scn, measure, Side::UpperOnTail, points))
}

/// Steady-state Lundberg bound for a classical scenario with one constant
/// side (i.i.d. or Markov additive other side).
pub fn lundberg_for(scn: &Scenario) -> Result<LundbergBound> {
    scn.require_regime(Regime::Classical)?;
    let (a, s) = (scn.arrival(), scn.service());
    match (a, s) {
        (Process::Iid(a), Process::Iid(s)) => iid_lundberg_bound(a, s),
        (Process::Markov { kernel, initial }, _) => match s.as_constant() {
            Some(c) => map_lundberg_arrival_side(kernel, c, *initial),
            None => Err(Error::Precondition("Markov arrivals need a constant capacity".into())),
        },
        (_, Process::Markov { kernel, initial }) => match a.as_constant() {
            Some(l) => map_lundberg_capacity_side(kernel, l, *initial),
            None => Err(Error::Precondition("Markov capacity needs a constant arrival rate".into())),
        },
    }
}

/// Lundberg curves: exponential backlog/delay tails, and the transient
/// throughput tail with a constant side (θ optimised per point).
pub fn lundberg_curve(scn: &Scenario, measure: Measure, arguments: &[f64], grid: &ThetaGrid) -> Result<BoundCurve> {
    scn.require_regime(Regime::Classical)?;
    let t = scn.horizon();
    let points = match measure {
        Measure::Backlog | Measure::Delay => {
            let b = lundberg_for(scn)?;
            arguments
                .iter()
                .map(|&x| {
                    let log = b.prefactor.ln()
                        - b.theta * if measure == Measure::Backlog { x } else { b.delay_rate * x.floor() };
                    BoundPoint {
                        argument: x,
                        value: upper_from_log(log),
                        theta: Some(b.theta),
                        p: None,
                        vacuous: !(log < 0.0),
                    }
                })
                .collect()
        }
        Measure::Throughput => {
            grid.validate()?;
            enum Side1 {
                Arrival(MapKernel, usize, f64),
                Capacity(MapKernel, f64),
            }
            let side = if let Some(c) = scn.service().as_constant() {
                let (k, i) = scn.arrival().to_markov();
                Side1::Arrival(k, i, c)
            } else if let Some(l) = scn.arrival().as_constant() {
                Side1::Capacity(scn.service().to_markov().0, l)
            } else {
                return Err(Error::Precondition("throughput Lundberg curve needs a constant side".into()));
            };
            let mut pts = Vec::with_capacity(arguments.len());
            for &x in arguments {
                let (th, v) = optimize_theta(
                    |th| {
                        let v = match &side {
                            Side1::Arrival(k, i, c) => map_throughput_bound(k, *c, *i, t, x, th)?,
                            Side1::Capacity(k, l) => map_throughput_bound_capacity_side(k, *l, t, x, th)?,
                        };
                        Ok(v)
                    },
                    grid,
                )?;
                pts.push(BoundPoint {
                    argument: x,
                    value: v,
                    theta: Some(th),
                    p: None,
                    vacuous: v >= 1.0,
                });
            }
            pts
        }
    };
    Ok(curve(scn, measure, Side::UpperOnTail, points))
}

/// Smallest `x` whose optimised lower CDF bound reaches `1 - violation`,
/// so that `Pr(X > x) <= violation` is guaranteed. The lower bound need not
/// be monotone (the throughput expression dips where `x` crosses the mean
/// capacity), so `[lo, hi]` is scanned on `SCAN_POINTS` points for the first
/// success, `hi` doubling until one is found, then refined by bisection to
/// `tol` inside that bracket.
pub fn band_quantile(
    scn: &Scenario,
    measure: Measure,
    violation: f64,
    grid: &ThetaGrid,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    const SCAN_POINTS: usize = 200;
    if !(violation > 0.0 && violation < 1.0) {
        return Err(Error::domain(format!("violation probability {violation} outside (0,1)")));
    }
    let reached = |x: f64| -> Result<bool> {
        let c = band_curves(scn, measure, &[x], grid)?;
        Ok(c.lower.points[0].value >= 1.0 - violation)
    };
    if reached(lo)? {
        return Ok(lo);
    }
    let limit = if measure == Measure::Delay { scn.horizon() as f64 } else { f64::MAX };
    let mut hi = hi.max(lo + 1.0).min(limit);
    let (mut a, mut b) = loop {
        let xs = crate::numeric::linspace(lo, hi, SCAN_POINTS);
        let mut found = None;
        for w in xs.windows(2) {
            if reached(w[1])? {
                found = Some((w[0], w[1]));
                break;
            }
        }
        if let Some(br) = found {
            break br;
        }
        if hi >= limit {
            return Err(Error::NoRoot(format!("lower bound never reaches 1 - {violation}")));
        }
        hi = (lo + 2.0 * (hi - lo)).min(limit);
    };
    while b - a > tol * b.abs().max(1.0) {
        let mid = 0.5 * (a + b);
        if reached(mid)? {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(b)
}
