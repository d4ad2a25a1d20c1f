use rand::Rng;

use super::distribution::{Cgf, IncrementDistribution, PROB_SUM_TOL};
use crate::error::{Error, Result};

/// Iteration cap for the Perron-Frobenius power method.
pub const PF_MAX_ITERATIONS: usize = 100_000;
/// Convergence threshold on successive Rayleigh quotients (relative).
pub const PF_RAYLEIGH_TOL: f64 = 1e-12;
const PF_RESIDUAL_TOL: f64 = 1e-10;

/// Finite-state discrete-time Markov additive process.
///
/// The increment of a step from state `i` to state `j` is drawn from
/// `H_ij`, then mapped through `y = scale * x + offset`. The affine part
/// lets the same kernel describe `A(t)`, `A(t) - C t` and `-Q(t)` without
/// re-deriving the per-transition distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct MapKernel {
    transition: Vec<Vec<f64>>,
    increments: Vec<Vec<IncrementDistribution>>,
    scale: f64,
    offset: f64,
    row_cdf: Vec<Vec<f64>>,
}

/// Dominant eigenpair of the tilted kernel `F̂[θ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub theta: f64,
    /// Log of the Perron-Frobenius eigenvalue.
    pub kappa: f64,
    /// Right eigenvector, normalised so that `ϖ · h = 1`.
    pub h: Vec<f64>,
    /// Left eigenvector, normalised so that `v · h = 1`.
    pub v: Vec<f64>,
}

impl EigenPair {
    pub fn min_h(&self) -> f64 {
        self.h.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_h(&self) -> f64 {
        self.h.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `h_{j0} / min_j h_j`, the prefactor of change-of-measure bounds.
    pub fn prefactor(&self, initial: usize) -> f64 {
        self.h[initial] / self.min_h()
    }

    /// `max_k h_k / min_j h_j`, used when the starting state is unknown.
    pub fn spread(&self) -> f64 {
        self.max_h() / self.min_h()
    }
}

impl MapKernel {
    /// Kernel with a transition matrix and one increment distribution per
    /// transition `i -> j`.
    pub fn new(transition: Vec<Vec<f64>>, increments: Vec<Vec<IncrementDistribution>>) -> Result<Self> {
        let n = transition.len();
        if n == 0 {
            return Err(Error::domain("kernel needs at least one state"));
        }
        if transition.iter().any(|r| r.len() != n) || increments.len() != n || increments.iter().any(|r| r.len() != n)
        {
            return Err(Error::domain(format!("kernel rows must all have length {n}")));
        }
        for (i, row) in transition.iter().enumerate() {
            if row.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
                return Err(Error::domain(format!("row {i} has a negative or non-finite probability")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > PROB_SUM_TOL {
                return Err(Error::domain(format!("row {i} sums to {sum}, not 1")));
            }
        }
        let row_cdf = transition
            .iter()
            .map(|r| {
                r.iter()
                    .scan(0.0, |acc, &p| {
                        *acc += p;
                        Some(*acc)
                    })
                    .collect()
            })
            .collect();
        let kernel = Self {
            transition,
            increments,
            scale: 1.0,
            offset: 0.0,
            row_cdf,
        };
        if !kernel.is_irreducible() {
            return Err(Error::Precondition("transition matrix is reducible".into()));
        }
        Ok(kernel)
    }

    /// One-state kernel: an i.i.d. process with increment `dist`.
    pub fn single_state(dist: IncrementDistribution) -> Self {
        Self::new(vec![vec![1.0]], vec![vec![dist]]).expect("one-state kernel is valid")
    }

    /// Kernel where the increment depends only on the state entered.
    pub fn state_dependent(transition: Vec<Vec<f64>>, per_state: Vec<IncrementDistribution>) -> Result<Self> {
        let n = transition.len();
        if per_state.len() != n {
            return Err(Error::domain(format!("need {n} state increments, got {}", per_state.len())));
        }
        let increments = (0..n).map(|_| per_state.clone()).collect();
        Self::new(transition, increments)
    }

    pub fn num_states(&self) -> usize {
        self.transition.len()
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn increment(&self, i: usize, j: usize) -> &IncrementDistribution {
        &self.increments[i][j]
    }

    pub fn increments(&self) -> &[Vec<IncrementDistribution>] {
        &self.increments
    }

    /// `(scale, offset)` of the affine map applied to raw increments.
    pub fn affine(&self) -> (f64, f64) {
        (self.scale, self.offset)
    }

    /// The same chain with every increment shifted by `c`.
    pub fn shifted(&self, c: f64) -> Self {
        let mut k = self.clone();
        k.offset += c;
        k
    }

    /// The same chain with every increment negated.
    pub fn negated(&self) -> Self {
        let mut k = self.clone();
        k.scale = -k.scale;
        k.offset = -k.offset;
        k
    }

    /// Kernel of the clipped increments `[Y]^+`. Only defined on a kernel
    /// without an affine transform.
    pub fn clipped_positive(&self) -> Result<Self> {
        if self.scale != 1.0 || self.offset != 0.0 {
            return Err(Error::Precondition("clipping requires an untransformed kernel".into()));
        }
        let mut k = self.clone();
        for row in k.increments.iter_mut() {
            for h in row.iter_mut() {
                *h = h.clipped_positive();
            }
        }
        Ok(k)
    }

    fn transition_cgf(&self, i: usize, j: usize, theta: f64) -> Result<f64> {
        Ok(self.increments[i][j].cgf(self.scale * theta)? + theta * self.offset)
    }

    fn transition_mean(&self, i: usize, j: usize) -> f64 {
        self.scale * self.increments[i][j].mean() + self.offset
    }

    /// Every state reaches every other state.
    pub fn is_irreducible(&self) -> bool {
        let n = self.num_states();
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    let p = if forward { self.transition[i][j] } else { self.transition[j][i] };
                    if p > 0.0 && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(true) && reach(false)
    }

    /// Stationary distribution `ϖ` of the transition matrix.
    pub fn stationary(&self) -> Vec<f64> {
        let n = self.num_states();
        // Solve ϖ (P - I) = 0 with the last equation replaced by Σϖ = 1.
        let mut a = vec![vec![0.0; n + 1]; n];
        for (r, row) in a.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().take(n).enumerate() {
                *cell = self.transition[c][r] - if r == c { 1.0 } else { 0.0 };
            }
        }
        for c in 0..n {
            a[n - 1][c] = 1.0;
        }
        a[n - 1][n] = 1.0;
        let mut pi = solve_augmented(a);
        for p in pi.iter_mut() {
            *p = p.max(0.0);
        }
        let s: f64 = pi.iter().sum();
        pi.iter().map(|p| p / s).collect()
    }

    /// Stationary mean increment per step.
    pub fn stationary_mean(&self) -> f64 {
        let pi = self.stationary();
        let n = self.num_states();
        (0..n)
            .map(|i| {
                pi[i]
                    * (0..n)
                        .filter(|&j| self.transition[i][j] > 0.0)
                        .map(|j| self.transition[i][j] * self.transition_mean(i, j))
                        .sum::<f64>()
            })
            .sum()
    }

    /// Expected increment of one step leaving each state.
    pub fn state_means(&self) -> Vec<f64> {
        let n = self.num_states();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| self.transition[i][j] > 0.0)
                    .map(|j| self.transition[i][j] * self.transition_mean(i, j))
                    .sum()
            })
            .collect()
    }

    /// Largest increment reachable with positive probability.
    pub fn support_max(&self) -> f64 {
        let n = self.num_states();
        let mut best = f64::NEG_INFINITY;
        for i in 0..n {
            for j in 0..n {
                if self.transition[i][j] > 0.0 {
                    let h = &self.increments[i][j];
                    let m = if self.scale >= 0.0 {
                        self.scale * h.support_max()
                    } else {
                        self.scale * h.support_min()
                    };
                    best = best.max(m + self.offset);
                }
            }
        }
        best
    }

    /// Log-entries `log F̂_ij[θ]` (`-inf` for impossible transitions).
    pub fn log_kernel_matrix(&self, theta: f64) -> Result<Vec<Vec<f64>>> {
        let n = self.num_states();
        let mut out = vec![vec![f64::NEG_INFINITY; n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = self.transition[i][j];
                if p > 0.0 {
                    out[i][j] = p.ln() + self.transition_cgf(i, j, theta)?;
                }
            }
        }
        Ok(out)
    }

    /// `F̂[θ]` scaled so its largest entry is 1, and the log of the scale.
    pub fn normalized_kernel(&self, theta: f64) -> Result<(Vec<Vec<f64>>, f64)> {
        let logs = self.log_kernel_matrix(theta)?;
        let max = logs.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(Error::domain(format!("kernel entries diverge at θ = {theta}")));
        }
        let m = logs
            .into_iter()
            .map(|r| r.into_iter().map(|l| (l - max).exp()).collect())
            .collect();
        Ok((m, max))
    }

    /// Tilted kernel `F̂_ij[θ] = p_ij E[e^{θY} | i -> j]`.
    pub fn kernel_matrix(&self, theta: f64) -> Result<Vec<Vec<f64>>> {
        let n = self.num_states();
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = self.transition[i][j];
                if p > 0.0 {
                    let v = p * self.transition_cgf(i, j, theta)?.exp();
                    if !v.is_finite() {
                        return Err(Error::domain(format!("kernel entry ({i},{j}) diverges at θ = {theta}")));
                    }
                    out[i][j] = v;
                }
            }
        }
        Ok(out)
    }

    /// Perron-Frobenius eigenpair of `F̂[θ]` by shifted power iteration.
    pub fn pf_eigenpair(&self, theta: f64) -> Result<EigenPair> {
        if !self.is_irreducible() {
            return Err(Error::Precondition("Perron-Frobenius pair needs an irreducible chain".into()));
        }
        let n = self.num_states();
        let pi = self.stationary();
        if theta == 0.0 {
            return Ok(EigenPair {
                theta,
                kappa: 0.0,
                h: vec![1.0; n],
                v: pi,
            });
        }
        let (m, log_scale) = self.normalized_kernel(theta)?;
        let (rho, mut h) = dominant_pair(&m, false)?;
        let (_, mut v) = dominant_pair(&m, true)?;
        if h.iter().chain(v.iter()).any(|&x| !(x > 0.0)) {
            return Err(Error::Numerical(format!("eigenvector lost positivity at θ = {theta}")));
        }
        let pih: f64 = pi.iter().zip(&h).map(|(a, b)| a * b).sum();
        h.iter_mut().for_each(|x| *x /= pih);
        let vh: f64 = v.iter().zip(&h).map(|(a, b)| a * b).sum();
        v.iter_mut().for_each(|x| *x /= vh);
        Ok(EigenPair {
            theta,
            kappa: log_scale + rho.ln(),
            h,
            v,
        })
    }

    /// Draws the next state and the step increment from state `state`.
    pub fn sample_step<R: Rng + ?Sized>(&self, state: usize, rng: &mut R) -> (usize, f64) {
        let cdf = &self.row_cdf[state];
        let u = rng.random::<f64>() * cdf[cdf.len() - 1];
        let next = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        let x = self.increments[state][next].sample(rng);
        (next, self.scale * x + self.offset)
    }
}

fn mat_vec(m: &[Vec<f64>], x: &[f64], transpose: bool) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if transpose { m[j][i] * x[j] } else { m[i][j] * x[j] })
                .sum()
        })
        .collect()
}

/// Dominant eigenvalue and eigenvector of a nonnegative irreducible matrix.
/// Iterates on `M + sI` so that periodic chains still converge.
fn dominant_pair(m: &[Vec<f64>], transpose: bool) -> Result<(f64, Vec<f64>)> {
    let n = m.len();
    let row_sums: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| if transpose { m[j][i] } else { m[i][j] }).sum())
        .collect();
    let shift = 0.5 * (row_sums.iter().map(|s| s.max(1e-300).ln()).sum::<f64>() / n as f64).exp();
    let mut x = vec![1.0 / n as f64; n];
    let mut prev = f64::NAN;
    for _ in 0..PF_MAX_ITERATIONS {
        let mx = mat_vec(m, &x, transpose);
        let xx: f64 = x.iter().map(|a| a * a).sum();
        let rayleigh = x.iter().zip(&mx).map(|(a, b)| a * b).sum::<f64>() / xx;
        let xmax = x.iter().copied().fold(0.0, f64::max);
        let residual = mx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - rayleigh * b).abs())
            .fold(0.0, f64::max)
            / (xmax * rayleigh.max(f64::MIN_POSITIVE));
        if (rayleigh - prev).abs() <= PF_RAYLEIGH_TOL * rayleigh && residual <= PF_RESIDUAL_TOL {
            return Ok((rayleigh, x));
        }
        prev = rayleigh;
        let mut next: Vec<f64> = mx.iter().zip(&x).map(|(a, b)| a + shift * b).collect();
        let norm = next.iter().copied().fold(0.0, f64::max);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Numerical("power iteration collapsed".into()));
        }
        next.iter_mut().for_each(|v| *v /= norm);
        x = next;
    }
    Err(Error::Numerical(format!(
        "power iteration did not converge in {PF_MAX_ITERATIONS} iterations"
    )))
}

/// Gaussian elimination with partial pivoting on an `n x (n+1)` system.
fn solve_augmented(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap_or(col);
        a.swap(col, pivot);
        let d = a[col][col];
        if d == 0.0 {
            continue;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col] / d;
                if f != 0.0 {
                    for c in col..=n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    (0..n).map(|i| if a[i][i] == 0.0 { 0.0 } else { a[i][n] / a[i][i] }).collect()
}
