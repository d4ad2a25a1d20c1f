//! Bounds for the reflected (classical) queue: union-of-Chernoff tails for
//! arbitrary processes, and Lundberg-exponent bounds for i.i.d. and Markov
//! additive increments against a constant rate.

use super::{require_positive_theta, upper_from_log, Regime, Scenario};
use crate::error::{Error, Result};
use crate::numeric::{bisect, log_sum_exp};
use crate::processes::{Cgf, IncrementDistribution, MapKernel, NetIncrement};

/// Bisection tolerance (relative) for Lundberg roots.
pub const LUNDBERG_TOL: f64 = 1e-12;
const ROOT_BRACKET_CEILING: f64 = 1e6;

pub(crate) fn classical_backlog_log(scn: &Scenario, x: f64, theta: f64) -> Result<f64> {
    scn.require_regime(Regime::Classical)?;
    require_positive_theta(theta)?;
    let t = scn.horizon();
    let a = scn.arrival().log_mgf_suffixes(theta, t)?;
    let s = scn.service().log_mgf_suffixes(-theta, t)?;
    Ok(log_sum_exp(a.iter().zip(&s).map(|(a, s)| a + s)) - theta * x)
}

/// `Pr(B(t) > x) <= Σ_{s=0}^{t} E[e^{θ(A(s,t) - S(s,t))}] e^{-θx}`.
pub fn classical_backlog_tail_general(scn: &Scenario, x: f64, theta: f64) -> Result<f64> {
    Ok(upper_from_log(classical_backlog_log(scn, x, theta)?))
}

pub(crate) fn holder_conjugate(p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::domain(format!("Hölder exponent must exceed 1, got {p}")));
    }
    Ok(p / (p - 1.0))
}

/// Validates `d` and returns `⌊d⌋`: delays are whole slots, so
/// `Pr(D > d) = Pr(D > ⌊d⌋)`.
pub(crate) fn check_delay(scn: &Scenario, d: f64) -> Result<f64> {
    if !(0.0..=scn.horizon() as f64).contains(&d) {
        return Err(Error::domain(format!("delay argument {d} outside [0, {}]", scn.horizon())));
    }
    Ok(d.floor())
}

pub(crate) fn classical_delay_log(scn: &Scenario, d: f64, theta: f64, p: f64) -> Result<f64> {
    scn.require_regime(Regime::Classical)?;
    require_positive_theta(theta)?;
    let d = check_delay(scn, d)?;
    let q = holder_conjugate(p)?;
    let t = scn.horizon();
    let a = scn.arrival().log_mgf_suffixes(theta * p, t)?;
    let s = scn.service().log_mgf_suffixes(-theta * p, t)?;
    let start = t - d as usize;
    let window = scn.arrival().log_mgf_suffixes(-theta * q, t)?[start];
    Ok(log_sum_exp(a.iter().zip(&s).map(|(a, s)| (a + s) / p)) + window / q)
}

/// Hölder form: `Pr(D(t) > d) <= Σ_s E[e^{θp(A(s,t)-S(s,t))}]^{1/p} E[e^{-θq A(t-d,t)}]^{1/q}`.
pub fn classical_delay_tail_general(scn: &Scenario, d: f64, theta: f64, p: f64) -> Result<f64> {
    Ok(upper_from_log(classical_delay_log(scn, d, theta, p)?))
}

pub(crate) fn classical_throughput_log(scn: &Scenario, x: f64, theta: f64) -> Result<f64> {
    scn.require_regime(Regime::Classical)?;
    require_positive_theta(theta)?;
    let t = scn.horizon();
    let a = scn.arrival().log_mgf_prefixes(theta, t)?;
    let s = scn.service().log_mgf_suffixes(theta, t)?;
    let min = a.iter().zip(&s).map(|(a, s)| a + s).fold(f64::INFINITY, f64::min);
    Ok(min - theta * x)
}

/// `Pr(A*(t) > x) <= min_s E[e^{θ(A(0,s) + S(s,t))}] e^{-θx}`.
pub fn classical_throughput_tail_general(scn: &Scenario, x: f64, theta: f64) -> Result<f64> {
    Ok(upper_from_log(classical_throughput_log(scn, x, theta)?))
}

/// Positive root of a convex `κ` with `κ(0) = 0` and `κ'(0) < 0`.
fn convex_positive_root<F: FnMut(f64) -> Result<f64>>(mut kappa: F) -> Result<f64> {
    let mut f = |th: f64| match kappa(th) {
        Ok(v) => Ok(v),
        Err(Error::Domain(_)) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    };
    let mut hi = 1.0;
    while f(hi)? <= 0.0 {
        hi *= 2.0;
        if hi > ROOT_BRACKET_CEILING {
            return Err(Error::NoRoot(format!("κ stays nonpositive up to θ = {ROOT_BRACKET_CEILING}")));
        }
    }
    bisect(f, 0.0, hi, LUNDBERG_TOL)
}

/// Lundberg exponent: the unique `θ* > 0` with `κ(θ*) = 0` for an increment
/// with negative mean.
pub fn lundberg_root<C: Cgf + ?Sized>(increment: &C) -> Result<f64> {
    if increment.support_max() <= 0.0 {
        return Err(Error::Degenerate("increment is almost surely nonpositive; the tail is 0".into()));
    }
    let mean = increment.mean();
    if !(mean < 0.0) {
        return Err(Error::NoRoot(format!("drift {mean} is not negative")));
    }
    convex_positive_root(|th| increment.cgf(th))
}

/// Exponential steady-state tail bounds `K e^{-θx}` (backlog) and
/// `K e^{-θ r d}` (delay), with `r` the constant service or arrival rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LundbergBound {
    pub theta: f64,
    pub prefactor: f64,
    pub delay_rate: f64,
}

impl LundbergBound {
    pub fn backlog_tail(&self, x: f64) -> f64 {
        upper_from_log(self.prefactor.ln() - self.theta * x)
    }

    /// `Pr(D > d) = Pr(D > ⌊d⌋) <= K e^{-θ r ⌊d⌋}`.
    pub fn delay_tail(&self, d: f64) -> f64 {
        self.backlog_tail(self.delay_rate * d.floor())
    }
}

/// Lundberg bound for i.i.d. arrivals against a constant capacity, or a
/// constant arrival rate against i.i.d. capacity.
pub fn iid_lundberg_bound(arrival: &IncrementDistribution, capacity: &IncrementDistribution) -> Result<LundbergBound> {
    let delay_rate = match (arrival, capacity) {
        (_, IncrementDistribution::Constant(c)) => *c,
        (IncrementDistribution::Constant(l), _) => *l,
        _ => {
            return Err(Error::Precondition(
                "Lundberg bound needs a constant capacity or a constant arrival rate".into(),
            ))
        }
    };
    let theta = lundberg_root(&NetIncrement::new(arrival.clone(), capacity.clone()))?;
    Ok(LundbergBound {
        theta,
        prefactor: 1.0,
        delay_rate,
    })
}

/// Lundberg bound for a Markov additive net increment `kernel` started in
/// `initial`; the prefactor is `h_{J0}(θ*) / min_j h_j(θ*)`.
pub fn map_lundberg_bound(kernel: &MapKernel, initial: usize, delay_rate: f64) -> Result<LundbergBound> {
    if initial >= kernel.num_states() {
        return Err(Error::IndexOutOfRange {
            index: initial,
            len: kernel.num_states(),
        });
    }
    if kernel.support_max() <= 0.0 {
        return Err(Error::Degenerate("increments are almost surely nonpositive; the tail is 0".into()));
    }
    let drift = kernel.stationary_mean();
    if !(drift < 0.0) {
        return Err(Error::NoRoot(format!("stationary drift {drift} is not negative")));
    }
    let theta = convex_positive_root(|th| Ok(kernel.pf_eigenpair(th)?.kappa))?;
    let prefactor = kernel.pf_eigenpair(theta)?.prefactor(initial);
    Ok(LundbergBound {
        theta,
        prefactor,
        delay_rate,
    })
}

/// Markov additive arrivals against constant capacity `c`: root of
/// `κ(θ) = 0` for the kernel of `A(t) - c t`.
pub fn map_lundberg_arrival_side(arrival: &MapKernel, capacity: f64, initial: usize) -> Result<LundbergBound> {
    map_lundberg_bound(&arrival.shifted(-capacity), initial, capacity)
}

/// Constant arrival rate `lambda` against Markov additive capacity: root of
/// `κ(-θ) = 0` for the kernel of `S(t) - λ t`.
pub fn map_lundberg_capacity_side(capacity: &MapKernel, lambda: f64, initial: usize) -> Result<LundbergBound> {
    map_lundberg_bound(&capacity.negated().shifted(lambda), initial, lambda)
}

/// Markov additive arrivals, constant capacity `c`:
/// `min_s h_{J0}/min h · e^{sκ(θ) + θ(t-s)c} e^{-θx}`.
pub fn map_throughput_bound(arrival: &MapKernel, capacity: f64, initial: usize, t: usize, x: f64, theta: f64) -> Result<f64> {
    require_positive_theta(theta)?;
    let e = arrival.pf_eigenpair(theta)?;
    let pref = e.prefactor(initial).ln();
    let min = (0..=t)
        .map(|s| s as f64 * e.kappa + theta * (t - s) as f64 * capacity)
        .fold(f64::INFINITY, f64::min);
    Ok(upper_from_log(pref + min - theta * x))
}

/// Markov additive capacity, constant arrivals `lambda`:
/// `min_s max h/min h · e^{(t-s)κ(θ) + θsλ} e^{-θx}`.
pub fn map_throughput_bound_capacity_side(capacity: &MapKernel, lambda: f64, t: usize, x: f64, theta: f64) -> Result<f64> {
    require_positive_theta(theta)?;
    let e = capacity.pf_eigenpair(theta)?;
    let pref = e.spread().ln();
    let min = (0..=t)
        .map(|s| (t - s) as f64 * e.kappa + theta * s as f64 * lambda)
        .fold(f64::INFINITY, f64::min);
    Ok(upper_from_log(pref + min - theta * x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::Process;

    fn poisson_vs_constant(t: usize) -> Scenario {
        Scenario::classical(
            Process::Iid(IncrementDistribution::poisson(1.0).unwrap()),
            Process::constant(2.0).unwrap(),
            t,
        )
        .unwrap()
    }

    #[test]
    fn deterministic_equal_rates() {
        let scn = Scenario::classical(Process::constant(3.0).unwrap(), Process::constant(3.0).unwrap(), 10).unwrap();
        let b = classical_backlog_tail_general(&scn, 4.0, 1.0).unwrap();
        assert!((b - 11.0 * (-4.0f64).exp()).abs() < 1e-14);
        assert!(classical_backlog_tail_general(&scn, 2.0, 20.0).unwrap() < 1e-15);
        assert_eq!(classical_backlog_tail_general(&scn, 0.0, 5.0).unwrap(), 1.0);
        assert_eq!(classical_delay_tail_general(&scn, 10.0, 1e-4, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn backlog_matches_term_by_term_sum() {
        let scn = poisson_vs_constant(16);
        let th: f64 = 1.0;
        let k = th.exp_m1() - 2.0 * th;
        let oracle: f64 = (0..=16).map(|s| ((16 - s) as f64 * k - th * 10.0).exp()).sum();
        let v = classical_backlog_tail_general(&scn, 10.0, th).unwrap();
        assert!((v - oracle).abs() < 1e-12 * oracle);
    }

    #[test]
    fn delay_matches_holder_sum_and_is_monotone() {
        let scn = poisson_vs_constant(12);
        let (th, p) = (0.4f64, 2.0f64);
        let q = 2.0;
        let ka = |u: f64| u.exp_m1();
        let d = 5.0;
        let oracle: f64 = (0..=12)
            .map(|s| {
                let m = (12 - s) as f64;
                ((m * (ka(th * p) - 2.0 * th * p)) / p + d * ka(-th * q) / q).exp()
            })
            .sum();
        let v = classical_delay_tail_general(&scn, d, th, p).unwrap();
        assert!((v - oracle.min(1.0)).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for d in 0..=12 {
            let v = classical_delay_log(&scn, d as f64, th, p).unwrap();
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn throughput_constant_rates_linear_in_s() {
        let scn = Scenario::classical(Process::constant(1.0).unwrap(), Process::constant(2.0).unwrap(), 10).unwrap();
        let th = 0.3;
        let x = 12.0;
        let v = classical_throughput_tail_general(&scn, x, th).unwrap();
        // λ < C: minimum at s = t.
        assert!((v - (th * (10.0 - x)).exp()).abs() < 1e-14);
        assert_eq!(classical_throughput_tail_general(&scn, 0.0, th).unwrap(), 1.0);
    }

    #[test]
    fn throughput_poisson_instance() {
        let scn = poisson_vs_constant(20);
        let th: f64 = 0.5;
        let x = 30.0;
        let oracle = (0..=20)
            .map(|s| (s as f64 * th.exp_m1() + th * 2.0 * (20 - s) as f64 - th * x).exp())
            .fold(f64::INFINITY, f64::min);
        let v = classical_throughput_tail_general(&scn, x, th).unwrap();
        assert!((v - oracle).abs() < 1e-12 * oracle);
    }

    #[test]
    fn lundberg_examples() {
        let p = IncrementDistribution::poisson(1.0).unwrap();
        let net = NetIncrement::new(p.clone(), IncrementDistribution::Constant(2.0));
        let th = lundberg_root(&net).unwrap();
        // Oracle: plain bisection on e^θ - 1 - 2θ.
        let (mut lo, mut hi) = (0.5f64, 3.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid.exp() - 1.0 - 2.0 * mid < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((th - lo).abs() < 1e-10);
        assert!((th - 1.256_431_208_626_170_2).abs() < 1e-9);
        assert!(net.cgf(th).unwrap().abs() < 1e-10);

        let coin = IncrementDistribution::finite_support(vec![-1.0, 1.0], vec![0.75, 0.25]).unwrap();
        let th = lundberg_root(&coin).unwrap();
        // ¾e^{-θ} + ¼e^{θ} = 1 is a quadratic in e^θ with roots 1 and 3.
        assert!((th - 3f64.ln()).abs() < 1e-11);

        let balanced = NetIncrement::new(p, IncrementDistribution::Constant(1.0));
        assert!(matches!(lundberg_root(&balanced), Err(Error::NoRoot(_))));
        let nonpositive = IncrementDistribution::finite_support(vec![-1.0, 0.0], vec![0.5, 0.5]).unwrap();
        assert!(matches!(lundberg_root(&nonpositive), Err(Error::Degenerate(_))));
    }

    #[test]
    fn lundberg_root_is_unique_on_bracket() {
        let net = NetIncrement::new(IncrementDistribution::poisson(1.0).unwrap(), IncrementDistribution::Constant(2.0));
        let th = lundberg_root(&net).unwrap();
        let changes = (1..4000)
            .map(|i| net.cgf(i as f64 * 1e-3).unwrap().signum())
            .collect::<Vec<_>>()
            .windows(2)
            .filter(|w| w[0] != w[1])
            .count();
        assert_eq!(changes, 1);
        assert!(th > 0.0);
    }

    #[test]
    fn delay_bound_is_backlog_at_scaled_argument() {
        let b = iid_lundberg_bound(&IncrementDistribution::poisson(1.0).unwrap(), &IncrementDistribution::Constant(2.0))
            .unwrap();
        for d in [0.0, 0.5, 3.0, 7.25] {
            assert_eq!(b.delay_tail(d), b.backlog_tail(2.0 * f64::floor(d)));
        }
    }

    #[test]
    fn one_state_map_reduces_to_iid() {
        let a = IncrementDistribution::poisson(1.0).unwrap();
        let iid = iid_lundberg_bound(&a, &IncrementDistribution::Constant(2.0)).unwrap();
        let map = map_lundberg_arrival_side(&MapKernel::single_state(a), 2.0, 0).unwrap();
        assert!((iid.theta - map.theta).abs() < 1e-10);
        assert_eq!(map.prefactor, 1.0);
        assert_eq!(map.backlog_tail(0.0), 1.0);
    }

    #[test]
    fn two_state_map_root_zeroes_kappa() {
        let k = MapKernel::state_dependent(
            vec![vec![0.9, 0.1], vec![0.2, 0.8]],
            vec![IncrementDistribution::poisson(1.0).unwrap(), IncrementDistribution::poisson(3.0).unwrap()],
        )
        .unwrap();
        let b = map_lundberg_arrival_side(&k, 2.5, 1).unwrap();
        let kappa = k.shifted(-2.5).pf_eigenpair(b.theta).unwrap().kappa;
        assert!(kappa.abs() < 1e-10);
        assert!(b.prefactor >= 1.0);
        let cap_side = map_lundberg_capacity_side(&k, 1.0, 0).unwrap();
        let kappa = k.shifted(-1.0).pf_eigenpair(-cap_side.theta).unwrap().kappa;
        assert!(kappa.abs() < 1e-10);
        assert!(matches!(map_lundberg_arrival_side(&k, 1.0, 0), Err(Error::NoRoot(_))));
    }

    #[test]
    fn map_throughput_dominates_exact_moment_minimum() {
        let k = MapKernel::state_dependent(
            vec![vec![0.9, 0.1], vec![0.2, 0.8]],
            vec![IncrementDistribution::Constant(1.0), IncrementDistribution::Constant(4.0)],
        )
        .unwrap();
        let (t, x, th, c) = (15usize, 40.0, 0.2, 2.5);
        let proc = Process::markov(k.clone(), 0).unwrap();
        let pre = proc.log_mgf_prefixes(th, t).unwrap();
        let exact = (0..=t)
            .map(|s| (pre[s] + th * c * (t - s) as f64 - th * x).exp())
            .fold(f64::INFINITY, f64::min);
        let bound = map_throughput_bound(&k, c, 0, t, x, th).unwrap();
        assert!(bound >= exact.min(1.0) - 1e-15);
        let one = map_throughput_bound(&MapKernel::single_state(IncrementDistribution::Constant(1.0)), 2.0, 0, 10, 0.0, 0.5);
        assert_eq!(one.unwrap(), 1.0);
    }
}
