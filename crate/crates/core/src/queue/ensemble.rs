use std::ops::Range;

use rayon::prelude::*;

use super::trajectory::{delay_from_cumulative, step_classical};
use crate::bounds::{Measure, Regime, Scenario};
use crate::error::{Error, Result};
use crate::processes::path_rng;

/// Normal quantile used for binomial confidence half-widths by default.
pub const DEFAULT_Z: f64 = 3.0;

/// A point estimate with a confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub half_width: f64,
}

/// Final-time samples `B(t)`, `A*(t)`, `D(t)` of independent paths, in path
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    regime: Regime,
    horizon: usize,
    z: f64,
    backlog: Vec<f64>,
    output: Vec<f64>,
    delay: Vec<f64>,
    sorted: [Vec<f64>; 3],
}

struct Buffers {
    arrivals: Vec<f64>,
    capacity: Vec<f64>,
    cumulative: Vec<f64>,
}

fn simulate(scn: &Scenario, seed: u64, path: u64, buf: &mut Buffers) -> (f64, f64, f64) {
    let mut ra = path_rng(seed, 2 * path);
    let mut rc = path_rng(seed, 2 * path + 1);
    scn.arrival().fill_increments(&mut ra, &mut buf.arrivals, None);
    scn.capacity().fill_increments(&mut rc, &mut buf.capacity, None);
    let mut a = 0.0;
    buf.cumulative[0] = 0.0;
    let (backlog, output) = match scn.regime() {
        Regime::Classical => {
            let mut b = 0.0;
            for (k, (&ai, &ci)) in buf.arrivals.iter().zip(&buf.capacity).enumerate() {
                a += ai;
                b = step_classical(b, ai, ci);
                buf.cumulative[k + 1] = a;
            }
            (b, a - b)
        }
        Regime::Quantum => {
            let mut q = 0.0;
            for (k, (&ai, &ci)) in buf.arrivals.iter().zip(&buf.capacity).enumerate() {
                a += ai;
                q += ci.max(0.0);
                buf.cumulative[k + 1] = a;
            }
            // Closed form, so that `D = 0` and `B <= 0` coincide bit-exactly.
            (a - q, a.min(q))
        }
    };
    let delay = delay_from_cumulative(&buf.cumulative, output) as f64;
    (backlog, output, delay)
}

/// Paths `0..n_paths` of `scn` under `seed`.
pub fn run_ensemble(scn: &Scenario, n_paths: usize, seed: u64) -> Result<EnsembleStats> {
    if n_paths == 0 {
        return Err(Error::Precondition("ensemble needs at least one path".into()));
    }
    run_ensemble_range(scn, 0..n_paths as u64, seed)
}

/// Paths with indices in `paths`; path `k` draws arrivals from stream `2k`
/// and capacity from stream `2k + 1`. Disjoint ranges merge into the same
/// statistics as one run over their union.
pub fn run_ensemble_range(scn: &Scenario, paths: Range<u64>, seed: u64) -> Result<EnsembleStats> {
    let t = scn.horizon();
    let rows: Vec<(f64, f64, f64)> = paths
        .into_par_iter()
        .map_init(
            || Buffers {
                arrivals: vec![0.0; t],
                capacity: vec![0.0; t],
                cumulative: vec![0.0; t + 1],
            },
            |buf, k| simulate(scn, seed, k, buf),
        )
        .collect();
    let mut backlog = Vec::with_capacity(rows.len());
    let mut output = Vec::with_capacity(rows.len());
    let mut delay = Vec::with_capacity(rows.len());
    for (b, o, d) in rows {
        backlog.push(b);
        output.push(o);
        delay.push(d);
    }
    Ok(EnsembleStats::from_samples(scn.regime(), t, backlog, output, delay))
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

impl EnsembleStats {
    pub fn from_samples(regime: Regime, horizon: usize, backlog: Vec<f64>, output: Vec<f64>, delay: Vec<f64>) -> Self {
        let sorted = [sorted(&backlog), sorted(&delay), sorted(&output)];
        Self {
            regime,
            horizon,
            z: DEFAULT_Z,
            backlog,
            output,
            delay,
            sorted,
        }
    }

    pub fn with_z(mut self, z: f64) -> Self {
        self.z = z;
        self
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn num_paths(&self) -> usize {
        self.backlog.len()
    }

    /// Concatenation of two ensembles (`self` first).
    pub fn merge(&self, other: &EnsembleStats) -> Result<EnsembleStats> {
        if self.regime != other.regime || self.horizon != other.horizon {
            return Err(Error::Precondition("cannot merge ensembles of different scenarios".into()));
        }
        let cat = |a: &[f64], b: &[f64]| [a, b].concat();
        Ok(EnsembleStats::from_samples(
            self.regime,
            self.horizon,
            cat(&self.backlog, &other.backlog),
            cat(&self.output, &other.output),
            cat(&self.delay, &other.delay),
        )
        .with_z(self.z))
    }

    /// Samples in path order.
    pub fn samples(&self, measure: Measure) -> &[f64] {
        match measure {
            Measure::Backlog => &self.backlog,
            Measure::Delay => &self.delay,
            Measure::Throughput => &self.output,
        }
    }

    fn sorted_samples(&self, measure: Measure) -> &[f64] {
        match measure {
            Measure::Backlog => &self.sorted[0],
            Measure::Delay => &self.sorted[1],
            Measure::Throughput => &self.sorted[2],
        }
    }

    fn proportion(&self, count: usize) -> Estimate {
        let n = self.num_paths() as f64;
        let p = count as f64 / n;
        Estimate {
            value: p,
            half_width: self.z * (p * (1.0 - p) / n).sqrt(),
        }
    }

    /// Empirical `Pr(X <= x)`.
    pub fn cdf(&self, measure: Measure, x: f64) -> Estimate {
        self.proportion(self.sorted_samples(measure).partition_point(|&v| v <= x))
    }

    /// Empirical `Pr(X > x)`.
    pub fn tail(&self, measure: Measure, x: f64) -> Estimate {
        let s = self.sorted_samples(measure);
        self.proportion(s.len() - s.partition_point(|&v| v <= x))
    }

    /// Smallest sample `x` with empirical `Pr(X <= x) >= q`.
    pub fn quantile(&self, measure: Measure, q: f64) -> f64 {
        let s = self.sorted_samples(measure);
        let k = ((q * s.len() as f64).ceil() as usize).clamp(1, s.len());
        s[k - 1]
    }

    pub fn min(&self, measure: Measure) -> f64 {
        self.sorted_samples(measure)[0]
    }

    pub fn max(&self, measure: Measure) -> f64 {
        *self.sorted_samples(measure).last().unwrap()
    }

    /// Sample mean and its standard error.
    pub fn mean(&self, measure: Measure) -> (f64, f64) {
        mean_se(self.samples(measure))
    }

    /// Sample mean and standard error of `X(t)/t`.
    pub fn mean_per_slot(&self, measure: Measure) -> (f64, f64) {
        let t = self.horizon.max(1) as f64;
        let (m, se) = self.mean(measure);
        (m / t, se / t)
    }

    pub fn prob_delay_zero(&self) -> Estimate {
        self.proportion(self.delay.iter().filter(|&&d| d == 0.0).count())
    }

    pub fn prob_backlog_nonpositive(&self) -> Estimate {
        self.cdf(Measure::Backlog, 0.0)
    }

    /// Paths where `D(t) = 0` and `B(t) <= 0` disagree.
    pub fn delay_identity_violations(&self) -> usize {
        self.delay
            .iter()
            .zip(&self.backlog)
            .filter(|(&d, &b)| (d == 0.0) != (b <= 0.0))
            .count()
    }

    /// `(E[B | B >= 0], E[B | B <= 0])`, `None` when a side is empty.
    pub fn conditional_backlog_means(&self) -> (Option<f64>, Option<f64>) {
        let cond = |keep: fn(f64) -> bool| {
            let v: Vec<f64> = self.backlog.iter().copied().filter(|&b| keep(b)).collect();
            (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
        };
        (cond(|b| b >= 0.0), cond(|b| b <= 0.0))
    }
}
