use rand::Rng;

use super::distribution::{Cgf, IncrementDistribution};
use super::kernel::MapKernel;
use crate::error::{Error, Result};

/// A per-slot increment process: i.i.d. slots or a Markov additive process
/// started in a given state.
#[derive(Debug, Clone, PartialEq)]
pub enum Process {
    Iid(IncrementDistribution),
    Markov { kernel: MapKernel, initial: usize },
}

impl Process {
    pub fn constant(value: f64) -> Result<Self> {
        Ok(Process::Iid(IncrementDistribution::constant(value)?))
    }

    pub fn markov(kernel: MapKernel, initial: usize) -> Result<Self> {
        if initial >= kernel.num_states() {
            return Err(Error::IndexOutOfRange {
                index: initial,
                len: kernel.num_states(),
            });
        }
        Ok(Process::Markov { kernel, initial })
    }

    /// Steady-state mean increment per slot.
    pub fn mean_rate(&self) -> f64 {
        match self {
            Process::Iid(d) => d.mean(),
            Process::Markov { kernel, .. } => kernel.stationary_mean(),
        }
    }

    /// `E[X(0,t)]`, exact for the given initial state.
    pub fn mean_cumulative(&self, t: usize) -> f64 {
        match self {
            Process::Iid(d) => t as f64 * d.mean(),
            Process::Markov { kernel, initial } => {
                let m = kernel.state_means();
                let p = kernel.transition();
                let n = kernel.num_states();
                let mut pi = vec![0.0; n];
                pi[*initial] = 1.0;
                let mut total = 0.0;
                for _ in 0..t {
                    total += pi.iter().zip(&m).map(|(a, b)| a * b).sum::<f64>();
                    pi = (0..n).map(|j| (0..n).map(|i| pi[i] * p[i][j]).sum()).collect();
                }
                total
            }
        }
    }

    /// `Some(c)` when every slot is the constant `c`.
    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Process::Iid(IncrementDistribution::Constant(c)) => Some(*c),
            _ => None,
        }
    }

    pub fn as_iid(&self) -> Option<&IncrementDistribution> {
        match self {
            Process::Iid(d) => Some(d),
            _ => None,
        }
    }

    /// View as a Markov additive process; i.i.d. slots become a one-state
    /// kernel.
    pub fn to_markov(&self) -> (MapKernel, usize) {
        match self {
            Process::Iid(d) => (MapKernel::single_state(d.clone()), 0),
            Process::Markov { kernel, initial } => (kernel.clone(), *initial),
        }
    }

    pub fn is_markov(&self) -> bool {
        matches!(self, Process::Markov { .. })
    }

    /// Smallest possible slot increment.
    pub fn support_min(&self) -> f64 {
        match self {
            Process::Iid(d) => d.support_min(),
            Process::Markov { kernel, .. } => -kernel.negated().support_max(),
        }
    }

    /// Process of clipped increments `[X]^+`.
    pub fn clipped_positive(&self) -> Result<Self> {
        Ok(match self {
            Process::Iid(d) => Process::Iid(d.clipped_positive()),
            Process::Markov { kernel, initial } => Process::Markov {
                kernel: kernel.clipped_positive()?,
                initial: *initial,
            },
        })
    }

    /// `log E[e^{θ X(0,s)}]` for `s = 0..=t`, where `X(0,s)` sums the first
    /// `s` slots.
    pub fn log_mgf_prefixes(&self, theta: f64, t: usize) -> Result<Vec<f64>> {
        match self {
            Process::Iid(d) => {
                let k = d.cgf(theta)?;
                Ok((0..=t).map(|s| s as f64 * k).collect())
            }
            Process::Markov { kernel, initial } => {
                let (m, log_scale) = kernel.normalized_kernel(theta)?;
                let n = kernel.num_states();
                let mut row = vec![0.0; n];
                row[*initial] = 1.0;
                let mut acc = 0.0;
                let mut out = Vec::with_capacity(t + 1);
                out.push(0.0);
                for _ in 0..t {
                    let next: Vec<f64> = (0..n).map(|j| (0..n).map(|i| row[i] * m[i][j]).sum()).collect();
                    let total: f64 = next.iter().sum();
                    if !(total > 0.0) {
                        return Err(Error::Numerical("moment recursion underflowed".into()));
                    }
                    acc += total.ln() + log_scale;
                    row = next.into_iter().map(|v| v / total).collect();
                    out.push(acc);
                }
                Ok(out)
            }
        }
    }

    /// `log E[e^{θ X(s,t)}]` for `s = 0..=t`, where `X(s,t)` sums slots
    /// `s+1..=t` (so the `s = t` entry is 0).
    pub fn log_mgf_suffixes(&self, theta: f64, t: usize) -> Result<Vec<f64>> {
        match self {
            Process::Iid(d) => {
                let k = d.cgf(theta)?;
                Ok((0..=t).map(|s| (t - s) as f64 * k).collect())
            }
            Process::Markov { kernel, initial } => {
                let n = kernel.num_states();
                let (m, log_scale) = kernel.normalized_kernel(theta)?;
                // w_k = F̂^k 1 = exp(lw_k) * ŵ_k
                let mut w = vec![vec![1.0; n]];
                let mut lw = vec![0.0];
                for k in 0..t {
                    let prev = &w[k];
                    let next: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i][j] * prev[j]).sum()).collect();
                    let mx = next.iter().copied().fold(0.0, f64::max);
                    if !(mx > 0.0) {
                        return Err(Error::Numerical("moment recursion underflowed".into()));
                    }
                    lw.push(lw[k] + mx.ln() + log_scale);
                    w.push(next.into_iter().map(|v| v / mx).collect());
                }
                // π_s = e_{J0} P^s
                let p = kernel.transition();
                let mut pi = vec![0.0; n];
                pi[*initial] = 1.0;
                let mut out = Vec::with_capacity(t + 1);
                for s in 0..=t {
                    let k = t - s;
                    let dot: f64 = pi.iter().zip(&w[k]).map(|(a, b)| a * b).sum();
                    out.push(lw[k] + dot.ln());
                    pi = (0..n).map(|j| (0..n).map(|i| pi[i] * p[i][j]).sum()).collect();
                }
                Ok(out)
            }
        }
    }

    /// `log E[e^{θ X(0,t)}]`.
    pub fn log_mgf(&self, theta: f64, t: usize) -> Result<f64> {
        match self {
            Process::Iid(d) => Ok(t as f64 * d.cgf(theta)?),
            Process::Markov { .. } => Ok(self.log_mgf_prefixes(theta, t)?[t]),
        }
    }

    /// Fills `out` with `out.len()` consecutive slot increments.
    pub fn fill_increments<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64], states: Option<&mut Vec<usize>>) {
        match self {
            Process::Iid(d) => {
                for x in out.iter_mut() {
                    *x = d.sample(rng);
                }
                if let Some(st) = states {
                    st.clear();
                }
            }
            Process::Markov { kernel, initial } => {
                let mut state = *initial;
                let mut record = states;
                if let Some(st) = record.as_deref_mut() {
                    st.clear();
                    st.push(state);
                }
                for x in out.iter_mut() {
                    let (next, y) = kernel.sample_step(state, rng);
                    *x = y;
                    state = next;
                    if let Some(st) = record.as_deref_mut() {
                        st.push(state);
                    }
                }
            }
        }
    }
}
