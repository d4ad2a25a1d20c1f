//! Distribution bands for the quantum queue with Markov additive arrivals
//! and/or capacity, via Perron-Frobenius change of measure.

use super::classical::check_delay;
use super::quantum::{throughput_band, ThroughputPiece, ThroughputThetas};
use super::{require_positive_theta, Band, Measure, Regime, Scenario};
use crate::error::{Error, Result};
use crate::processes::MapKernel;

/// `ln(h_{J0}) - ln(min h)` and `κ` of `kernel` at `theta`.
fn tilt(kernel: &MapKernel, initial: usize, theta: f64) -> Result<(f64, f64)> {
    let e = kernel.pf_eigenpair(theta)?;
    Ok((e.prefactor(initial).ln(), e.kappa))
}

/// Kernels for arrivals `A`, clipped capacity `Q⁺` and `-Q⁺`.
#[derive(Debug, Clone)]
pub(crate) struct MapModel {
    t: f64,
    arrival: MapKernel,
    arrival_initial: usize,
    capacity: MapKernel,
    neg_capacity: MapKernel,
    capacity_initial: usize,
}

impl MapModel {
    pub(crate) fn new(scn: &Scenario) -> Result<Self> {
        scn.require_regime(Regime::Quantum)?;
        let (arrival, arrival_initial) = scn.arrival().to_markov();
        let (capacity, capacity_initial) = scn.service().to_markov();
        Ok(Self {
            t: scn.horizon() as f64,
            arrival,
            arrival_initial,
            neg_capacity: capacity.negated(),
            capacity,
            capacity_initial,
        })
    }

    // Sum of log-prefactors and `κ^A(sθ)`, `κ^{-Q}(sθ)` for sign `s`.
    fn joint(&self, theta: f64) -> Result<(f64, f64, f64)> {
        let (pa, ka) = tilt(&self.arrival, self.arrival_initial, theta)?;
        let (pq, kq) = tilt(&self.neg_capacity, self.capacity_initial, theta)?;
        Ok((pa + pq, ka, kq))
    }

    pub(crate) fn backlog_lower_log(&self, x: f64, theta: f64) -> Result<f64> {
        require_positive_theta(theta)?;
        let (h, ka, kq) = self.joint(theta)?;
        Ok(h + self.t * ka + self.t * kq - theta * x)
    }

    pub(crate) fn backlog_upper_log(&self, x: f64, theta: f64) -> Result<f64> {
        require_positive_theta(theta)?;
        let (h, ka, kq) = self.joint(-theta)?;
        Ok(h + self.t * ka + self.t * kq + theta * x)
    }

    pub(crate) fn delay_lower_log(&self, d: f64, theta: f64) -> Result<f64> {
        require_positive_theta(theta)?;
        let d = d.floor();
        let (h, ka, kq) = self.joint(theta)?;
        Ok(h + (self.t - d) * ka + self.t * kq)
    }

    pub(crate) fn delay_upper_log(&self, d: f64, theta: f64) -> Result<f64> {
        require_positive_theta(theta)?;
        let d = d.floor();
        let (h, ka, kq) = self.joint(-theta)?;
        Ok(h + (self.t - d) * ka + self.t * kq)
    }

    pub(crate) fn throughput_piece_log(&self, piece: ThroughputPiece, x: f64, theta: f64) -> Result<f64> {
        require_positive_theta(theta)?;
        let (kernel, initial, sign) = match piece {
            ThroughputPiece::CapacityTail => (&self.capacity, self.capacity_initial, 1.0),
            ThroughputPiece::ArrivalTail => (&self.arrival, self.arrival_initial, 1.0),
            ThroughputPiece::CapacityCdf => (&self.capacity, self.capacity_initial, -1.0),
            ThroughputPiece::ArrivalCdf => (&self.arrival, self.arrival_initial, -1.0),
        };
        let (h, k) = tilt(kernel, initial, sign * theta)?;
        Ok(h + self.t * k - sign * theta * x)
    }
}

/// `1 - H₋ e^{-θx + tκ^A(θ) + tκ^{-Q}(θ)} <= Pr(B(t) <= x) <= H₊ e^{θx + tκ^A(-θ) + tκ^{-Q}(-θ)}`.
pub fn quantum_map_backlog_band(scn: &Scenario, x: f64, theta_upper: f64, theta_lower: f64) -> Result<Band> {
    let m = MapModel::new(scn)?;
    Ok(Band::from_logs(
        m.backlog_lower_log(x, theta_lower)?,
        m.backlog_upper_log(x, theta_upper)?,
    ))
}

/// `1 - H₋ e^{(t-d)κ^A(θ) + tκ^{-Q}(θ)} <= Pr(D(t) <= d) <= H₊ e^{(t-d)κ^A(-θ) + tκ^{-Q}(-θ)}`.
pub fn quantum_map_delay_band(scn: &Scenario, d: f64, theta_upper: f64, theta_lower: f64) -> Result<Band> {
    check_delay(scn, d)?;
    let m = MapModel::new(scn)?;
    Ok(Band::from_logs(
        m.delay_lower_log(d, theta_lower)?,
        m.delay_upper_log(d, theta_upper)?,
    ))
}

/// Eight-term band on `Pr(A*(t) <= x)`.
pub fn quantum_map_throughput_band(scn: &Scenario, x: f64, thetas: ThroughputThetas) -> Result<Band> {
    let m = MapModel::new(scn)?;
    let mut logs = [0.0; 4];
    for (l, piece) in logs.iter_mut().zip(ThroughputPiece::ALL) {
        *l = m.throughput_piece_log(piece, x, thetas.get(piece))?;
    }
    Ok(throughput_band(logs))
}

/// Band for any measure with one θ shared by every term.
pub fn quantum_map_bands(scn: &Scenario, measure: Measure, argument: f64, theta: f64) -> Result<Band> {
    match measure {
        Measure::Backlog => quantum_map_backlog_band(scn, argument, theta, theta),
        Measure::Delay => quantum_map_delay_band(scn, argument, theta, theta),
        Measure::Throughput => quantum_map_throughput_band(scn, argument, ThroughputThetas::uniform(theta)),
    }
}

/// One side of the queue is a constant rate, the other Markov additive.
#[derive(Debug, Clone)]
pub(crate) enum ConstantModel {
    /// Constant capacity `c`; `net` is the kernel of `a - c`.
    Capacity {
        t: f64,
        c: f64,
        arrival: MapKernel,
        net: MapKernel,
        initial: usize,
    },
    /// Constant arrivals `λ`; `net` is the kernel of `λ - [Q]^+`.
    Arrival {
        t: f64,
        lambda: f64,
        capacity: MapKernel,
        net: MapKernel,
        initial: usize,
    },
}

impl ConstantModel {
    pub(crate) fn new(scn: &Scenario) -> Result<Self> {
        scn.require_regime(Regime::Quantum)?;
        let t = scn.horizon() as f64;
        if let Some(c) = scn.service().as_constant() {
            let (arrival, initial) = scn.arrival().to_markov();
            let net = arrival.shifted(-c);
            Ok(ConstantModel::Capacity {
                t,
                c,
                arrival,
                net,
                initial,
            })
        } else if let Some(lambda) = scn.arrival().as_constant() {
            let (capacity, initial) = scn.service().to_markov();
            let net = capacity.negated().shifted(lambda);
            Ok(ConstantModel::Arrival {
                t,
                lambda,
                capacity,
                net,
                initial,
            })
        } else {
            Err(Error::Precondition("band requires a constant capacity or a constant arrival rate".into()))
        }
    }

    fn net(&self) -> (f64, &MapKernel, usize) {
        match self {
            ConstantModel::Capacity { t, net, initial, .. } | ConstantModel::Arrival { t, net, initial, .. } => {
                (*t, net, *initial)
            }
        }
    }

    pub(crate) fn backlog_lower_log(&self, x: f64, theta: f64) -> Result<f64> {
        require_positive_theta(theta)?;
        let (t, net, initial) = self.net();
        let (h, k) = tilt(net, initial, theta)?;
        Ok(h + t * k - theta * x)
    }

    pub(crate) fn backlog_upper_log(&self, x: f64, theta: f64) -> Result<f64> {
        require_positive_theta(theta)?;
        let (t, net, initial) = self.net();
        let (h, k) = tilt(net, initial, -theta)?;
        Ok(h + t * k + theta * x)
    }

    pub(crate) fn delay_lower_log(&self, d: f64, theta: f64) -> Result<f64> {
        require_positive_theta(theta)?;
        let d = d.floor();
        match self {
            ConstantModel::Capacity {
                t, c, arrival, initial, ..
            } => {
                let (h, k) = tilt(arrival, *initial, theta)?;
                Ok(h - theta * c * t + (t - d) * k)
            }
            ConstantModel::Arrival {
                t,
                lambda,
                capacity,
                initial,
                ..
            } => {
                let (h, k) = tilt(capacity, *initial, -theta)?;
                Ok(h + theta * (t - d) * lambda + t * k)
            }
        }
    }

    pub(crate) fn delay_upper_log(&self, d: f64, theta: f64) -> Result<f64> {
        require_positive_theta(theta)?;
        let d = d.floor();
        match self {
            ConstantModel::Capacity {
                t, c, arrival, initial, ..
            } => {
                let (h, k) = tilt(arrival, *initial, -theta)?;
                Ok(h + theta * c * t + (t - d) * k)
            }
            ConstantModel::Arrival {
                t,
                lambda,
                capacity,
                initial,
                ..
            } => {
                let (h, k) = tilt(capacity, *initial, theta)?;
                Ok(h - theta * (t - d) * lambda + t * k)
            }
        }
    }
}

/// Backlog band with a constant capacity (kernel of `a - c`) or constant
/// arrivals (kernel of `λ - [Q]^+`).
pub fn quantum_map_constant_backlog_band(scn: &Scenario, x: f64, theta_upper: f64, theta_lower: f64) -> Result<Band> {
    let m = ConstantModel::new(scn)?;
    Ok(Band::from_logs(
        m.backlog_lower_log(x, theta_lower)?,
        m.backlog_upper_log(x, theta_upper)?,
    ))
}

/// Delay band with one constant side: `e^{∓θct + (t-d)κ^A(±θ)}` or
/// `e^{±θ(t-d)λ + tκ^Q(∓θ)}`.
pub fn quantum_map_constant_delay_band(scn: &Scenario, d: f64, theta_upper: f64, theta_lower: f64) -> Result<Band> {
    check_delay(scn, d)?;
    let m = ConstantModel::new(scn)?;
    Ok(Band::from_logs(
        m.delay_lower_log(d, theta_lower)?,
        m.delay_upper_log(d, theta_upper)?,
    ))
}

/// Backlog or delay band with one constant side and one shared θ. Throughput
/// falls back to the eight-term band, where a constant side has `h = 1`.
pub fn quantum_map_constant_bands(scn: &Scenario, measure: Measure, argument: f64, theta: f64) -> Result<Band> {
    match measure {
        Measure::Backlog => quantum_map_constant_backlog_band(scn, argument, theta, theta),
        Measure::Delay => quantum_map_constant_delay_band(scn, argument, theta, theta),
        Measure::Throughput => {
            ConstantModel::new(scn)?;
            quantum_map_throughput_band(scn, argument, ThroughputThetas::uniform(theta))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{quantum_iid_backlog_band, quantum_iid_delay_band, quantum_iid_throughput_band};
    use crate::processes::{IncrementDistribution, Process};

    fn two_state_arrivals(initial: usize) -> Process {
        let k = MapKernel::state_dependent(
            vec![vec![0.9, 0.1], vec![0.3, 0.7]],
            vec![IncrementDistribution::poisson(0.5).unwrap(), IncrementDistribution::poisson(3.0).unwrap()],
        )
        .unwrap();
        Process::markov(k, initial).unwrap()
    }

    fn close(a: Band, b: Band) -> bool {
        (a.lower - b.lower).abs() < 1e-12 && (a.upper - b.upper).abs() < 1e-12
    }

    #[test]
    fn one_state_kernels_reduce_to_iid() {
        let a = IncrementDistribution::poisson(2.0).unwrap();
        let q = IncrementDistribution::finite_support(vec![-1.0, 1.0, 4.0], vec![0.2, 0.5, 0.3]).unwrap();
        let iid = Scenario::quantum(Process::Iid(a.clone()), Process::Iid(q.clone()), 30).unwrap();
        let map = Scenario::quantum(
            Process::markov(MapKernel::single_state(a), 0).unwrap(),
            Process::markov(MapKernel::single_state(q), 0).unwrap(),
            30,
        )
        .unwrap();
        for (x, th) in [(10.0, 0.1), (50.0, 0.05), (80.0, 0.4), (0.0, 1.0)] {
            assert!(close(
                quantum_map_backlog_band(&map, x, th, th).unwrap(),
                quantum_iid_backlog_band(&iid, x, th, th).unwrap()
            ));
            assert!(close(
                quantum_map_bands(&map, Measure::Throughput, x, th).unwrap(),
                quantum_iid_throughput_band(&iid, x, th).unwrap()
            ));
        }
        for d in [0.0, 5.0, 29.0] {
            assert!(close(
                quantum_map_delay_band(&map, d, 0.2, 0.3).unwrap(),
                quantum_iid_delay_band(&iid, d, 0.2, 0.3).unwrap()
            ));
        }
    }

    #[test]
    fn constant_capacity_matches_full_band() {
        let scn = Scenario::quantum(two_state_arrivals(1), Process::constant(1.5).unwrap(), 40).unwrap();
        for (x, th) in [(5.0, 0.1), (20.0, 0.3), (60.0, 0.05)] {
            let a = quantum_map_constant_backlog_band(&scn, x, th, th).unwrap();
            let b = quantum_map_backlog_band(&scn, x, th, th).unwrap();
            assert!((a.lower - b.lower).abs() < 1e-10 && (a.upper - b.upper).abs() < 1e-10);
            let a = quantum_map_constant_delay_band(&scn, 7.0, th, th).unwrap();
            let b = quantum_map_delay_band(&scn, 7.0, th, th).unwrap();
            assert!((a.lower - b.lower).abs() < 1e-10 && (a.upper - b.upper).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_arrival_matches_full_band() {
        let cap = two_state_arrivals(0);
        let scn = Scenario::quantum(Process::constant(1.0).unwrap(), cap, 40).unwrap();
        for (x, th) in [(-5.0, 0.1), (0.0, 0.3), (10.0, 0.05)] {
            let a = quantum_map_constant_backlog_band(&scn, x, th, th).unwrap();
            let b = quantum_map_backlog_band(&scn, x, th, th).unwrap();
            assert!((a.lower - b.lower).abs() < 1e-10 && (a.upper - b.upper).abs() < 1e-10);
            let a = quantum_map_constant_delay_band(&scn, 3.0, th, th).unwrap();
            let b = quantum_map_delay_band(&scn, 3.0, th, th).unwrap();
            assert!((a.lower - b.lower).abs() < 1e-10 && (a.upper - b.upper).abs() < 1e-10);
        }
    }

    #[test]
    fn chernoff_terms_dominate_exact_moments() {
        let arr = two_state_arrivals(0);
        let scn = Scenario::quantum(arr.clone(), Process::constant(1.2).unwrap(), 25).unwrap();
        let m = MapModel::new(&scn).unwrap();
        for th in [0.05, 0.2, 0.6] {
            let exact = arr.log_mgf(th, 25).unwrap() - th * 1.2 * 25.0 - th * 3.0;
            assert!(m.backlog_lower_log(3.0, th).unwrap() >= exact - 1e-12);
            let exact = arr.log_mgf(-th, 25).unwrap() + th * 1.2 * 25.0 + th * 3.0;
            assert!(m.backlog_upper_log(3.0, th).unwrap() >= exact - 1e-12);
        }
    }

    #[test]
    fn extreme_arguments() {
        let scn = Scenario::quantum(two_state_arrivals(0), Process::constant(1.2).unwrap(), 25).unwrap();
        let b = quantum_map_backlog_band(&scn, 1e6, 1.0, 1.0).unwrap();
        assert_eq!(b.upper, 1.0);
        assert!(b.lower > 1.0 - 1e-12);
        let c = quantum_map_constant_bands(&scn, Measure::Backlog, f64::INFINITY, 1.0).unwrap();
        assert_eq!((c.lower, c.upper), (1.0, 1.0));
    }

    #[test]
    fn constant_bands_need_a_constant_side() {
        let scn = Scenario::quantum(two_state_arrivals(0), two_state_arrivals(1), 10).unwrap();
        assert!(matches!(
            quantum_map_constant_bands(&scn, Measure::Backlog, 1.0, 0.5),
            Err(Error::Precondition(_))
        ));
    }
}
