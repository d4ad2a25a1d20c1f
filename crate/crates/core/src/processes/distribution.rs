use rand::Rng;
use rand_distr::Distribution;

use crate::error::{Error, Result};

/// Tolerance on the total mass of a finite-support distribution.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// A one-slot increment with a cumulant generating function
/// `κ(θ) = log E[e^{θX}]`.
pub trait Cgf {
    fn cgf(&self, theta: f64) -> Result<f64>;

    fn mean(&self) -> f64;

    /// Essential supremum of the increment (`+inf` when unbounded).
    fn support_max(&self) -> f64;
}

/// Per-slot random increment: an arrival amount or a channel capacity.
#[derive(Debug, Clone, PartialEq)]
pub enum IncrementDistribution {
    Constant(f64),
    Poisson(Poisson),
    FiniteSupport(FiniteSupport),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Poisson {
    rate: f64,
    sampler: Option<rand_distr::Poisson<f64>>,
}

impl Poisson {
    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// Discrete distribution on finitely many real values.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSupport {
    values: Vec<f64>,
    probs: Vec<f64>,
    cdf: Vec<f64>,
}

impl FiniteSupport {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

impl IncrementDistribution {
    pub fn constant(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::domain(format!("constant increment must be finite, got {value}")));
        }
        Ok(IncrementDistribution::Constant(value))
    }

    pub fn poisson(rate: f64) -> Result<Self> {
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::domain(format!("Poisson rate must be finite and >= 0, got {rate}")));
        }
        let sampler = if rate > 0.0 {
            Some(rand_distr::Poisson::new(rate).map_err(|e| Error::domain(e.to_string()))?)
        } else {
            None
        };
        Ok(IncrementDistribution::Poisson(Poisson { rate, sampler }))
    }

    pub fn finite_support(values: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() != probs.len() {
            return Err(Error::domain(format!(
                "finite support needs matching non-empty values/probs, got {} and {}",
                values.len(),
                probs.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("finite support values must be finite"));
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::domain("probabilities must be finite and >= 0"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::domain(format!("probabilities sum to {total}, not 1")));
        }
        let cdf = probs
            .iter()
            .scan(0.0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        Ok(IncrementDistribution::FiniteSupport(FiniteSupport { values, probs, cdf }))
    }

    pub fn variance(&self) -> f64 {
        match self {
            IncrementDistribution::Constant(_) => 0.0,
            IncrementDistribution::Poisson(p) => p.rate,
            IncrementDistribution::FiniteSupport(f) => {
                let m = self.mean();
                f.values.iter().zip(&f.probs).map(|(v, p)| p * (v - m).powi(2)).sum()
            }
        }
    }

    pub fn support_min(&self) -> f64 {
        match self {
            IncrementDistribution::Constant(c) => *c,
            IncrementDistribution::Poisson(_) => 0.0,
            IncrementDistribution::FiniteSupport(f) => f
                .values
                .iter()
                .zip(&f.probs)
                .filter(|(_, &p)| p > 0.0)
                .map(|(&v, _)| v)
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Distribution of `[X]^+ = max(X, 0)`.
    pub fn clipped_positive(&self) -> Self {
        match self {
            IncrementDistribution::Constant(c) => IncrementDistribution::Constant(c.max(0.0)),
            IncrementDistribution::Poisson(_) => self.clone(),
            IncrementDistribution::FiniteSupport(f) => {
                let mut values: Vec<f64> = Vec::with_capacity(f.values.len());
                let mut probs: Vec<f64> = Vec::with_capacity(f.values.len());
                for (&v, &p) in f.values.iter().zip(&f.probs) {
                    let v = v.max(0.0);
                    match values.iter().position(|&u| u == v) {
                        Some(i) => probs[i] += p,
                        None => {
                            values.push(v);
                            probs.push(p);
                        }
                    }
                }
                IncrementDistribution::finite_support(values, probs)
                    .expect("clipping preserves a valid distribution")
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            IncrementDistribution::Constant(c) => *c,
            IncrementDistribution::Poisson(p) => match &p.sampler {
                Some(s) => s.sample(rng),
                None => 0.0,
            },
            IncrementDistribution::FiniteSupport(f) => {
                let total = *f.cdf.last().expect("non-empty support");
                let u = rng.random::<f64>() * total;
                let i = f.cdf.partition_point(|&c| c <= u).min(f.values.len() - 1);
                f.values[i]
            }
        }
    }
}

fn finite_or_domain(value: f64, theta: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(format!("cumulant generating function diverges at θ = {theta}")))
    }
}

impl Cgf for IncrementDistribution {
    fn cgf(&self, theta: f64) -> Result<f64> {
        if theta.is_nan() {
            return Err(Error::domain("θ is NaN"));
        }
        if theta == 0.0 {
            return Ok(0.0);
        }
        let value = match self {
            IncrementDistribution::Constant(c) => theta * c,
            IncrementDistribution::Poisson(p) => p.rate * theta.exp_m1(),
            IncrementDistribution::FiniteSupport(f) => crate::numeric::log_sum_exp(
                f.values
                    .iter()
                    .zip(&f.probs)
                    .filter(|(_, &p)| p > 0.0)
                    .map(|(v, p)| theta * v + p.ln()),
            ),
        };
        finite_or_domain(value, theta)
    }

    fn mean(&self) -> f64 {
        match self {
            IncrementDistribution::Constant(c) => *c,
            IncrementDistribution::Poisson(p) => p.rate,
            IncrementDistribution::FiniteSupport(f) => f.values.iter().zip(&f.probs).map(|(v, p)| v * p).sum(),
        }
    }

    fn support_max(&self) -> f64 {
        match self {
            IncrementDistribution::Constant(c) => *c,
            IncrementDistribution::Poisson(p) => {
                if p.rate > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            IncrementDistribution::FiniteSupport(f) => f
                .values
                .iter()
                .zip(&f.probs)
                .filter(|(_, &p)| p > 0.0)
                .map(|(&v, _)| v)
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Queue increment `a - s` of independent arrival and service slots.
#[derive(Debug, Clone, PartialEq)]
pub struct NetIncrement {
    pub arrival: IncrementDistribution,
    pub service: IncrementDistribution,
}

impl NetIncrement {
    pub fn new(arrival: IncrementDistribution, service: IncrementDistribution) -> Self {
        Self { arrival, service }
    }
}

impl Cgf for NetIncrement {
    fn cgf(&self, theta: f64) -> Result<f64> {
        Ok(self.arrival.cgf(theta)? + self.service.cgf(-theta)?)
    }

    fn mean(&self) -> f64 {
        self.arrival.mean() - self.service.mean()
    }

    fn support_max(&self) -> f64 {
        self.arrival.support_max() - self.service.support_min()
    }
}
