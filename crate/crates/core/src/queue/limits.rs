use std::fmt;

use super::ensemble::{run_ensemble, Estimate};
use crate::bounds::{Measure, Regime, Scenario};
use crate::error::{Error, Result};

/// Horizons at which the limit statements are checked by default.
pub const DEFAULT_LADDER: [usize; 3] = [100, 1_000, 10_000];

/// Ensemble summary at one horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitRung {
    pub horizon: usize,
    pub paths: usize,
    /// Mean and standard error of `B(t)/t`.
    pub backlog_per_slot: (f64, f64),
    /// Mean and standard error of `A*(t)/t`.
    pub output_per_slot: (f64, f64),
    pub mean_delay: (f64, f64),
    pub prob_delay_zero: Estimate,
    pub prob_backlog_nonpositive: Estimate,
    pub identity_violations: usize,
    /// Standard deviation of `B(t)`.
    pub backlog_sd: f64,
    /// Exact `E[A(t)]/t - E[Q⁺(t)]/t` at this horizon.
    pub exact_drift: f64,
    pub conditional_backlog: (Option<f64>, Option<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitCheck {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub lambda: f64,
    pub q: f64,
    pub rungs: Vec<LimitRung>,
    pub checks: Vec<LimitCheck>,
}

impl LimitReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&LimitCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for LimitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "arrival rate {:.6}, capacity rate {:.6}", self.lambda, self.q)?;
        for r in &self.rungs {
            writeln!(
                f,
                "t={} paths={} E[B/t]={:.6}±{:.2e} E[A*/t]={:.6}±{:.2e} E[D]={:.3} Pr(D=0)={:.4} Pr(B<=0)={:.4} mismatches={}",
                r.horizon,
                r.paths,
                r.backlog_per_slot.0,
                r.backlog_per_slot.1,
                r.output_per_slot.0,
                r.output_per_slot.1,
                r.mean_delay.0,
                r.prob_delay_zero.value,
                r.prob_backlog_nonpositive.value,
                r.identity_violations
            )?;
        }
        for c in &self.checks {
            let s = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::NotApplicable => "N/A ",
            };
            writeln!(f, "[{s}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn status(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

/// Runs `paths` quantum-queue paths at every horizon of `ladder` (seed
/// offset by rung) and checks: the `D = 0` / `B <= 0` identity, the mean
/// backlog and output rates, the trend of `Pr(D = 0)`, and the sign mismatch
/// between mean delay and mean backlog under spare capacity.
pub fn check_limit_theorems(scn: &Scenario, ladder: &[usize], paths: usize, seed: u64) -> Result<LimitReport> {
    scn.require_regime(Regime::Quantum)?;
    if ladder.is_empty() {
        return Err(Error::Precondition("empty horizon ladder".into()));
    }
    let lambda = scn.arrival().mean_rate();
    let q = scn.service().mean_rate();
    let mut rungs = Vec::with_capacity(ladder.len());
    for (i, &t) in ladder.iter().enumerate() {
        if t == 0 {
            return Err(Error::Precondition("ladder horizons must be positive".into()));
        }
        let e = run_ensemble(&scn.with_horizon(t), paths, seed.wrapping_add(i as u64))?;
        let b = e.samples(Measure::Backlog);
        let mean_b = b.iter().sum::<f64>() / b.len() as f64;
        let sd = (b.iter().map(|x| (x - mean_b).powi(2)).sum::<f64>() / (b.len().max(2) - 1) as f64).sqrt();
        rungs.push(LimitRung {
            horizon: t,
            paths,
            backlog_per_slot: e.mean_per_slot(Measure::Backlog),
            output_per_slot: e.mean_per_slot(Measure::Throughput),
            mean_delay: e.mean(Measure::Delay),
            prob_delay_zero: e.prob_delay_zero(),
            prob_backlog_nonpositive: e.prob_backlog_nonpositive(),
            identity_violations: e.delay_identity_violations(),
            backlog_sd: sd,
            exact_drift: (scn.arrival().mean_cumulative(t) - scn.service().mean_cumulative(t)) / t as f64,
            conditional_backlog: e.conditional_backlog_means(),
        });
    }
    let se = |x: f64| if x.is_finite() { x } else { 0.0 };
    let mut checks = Vec::new();

    let violations: usize = rungs.iter().map(|r| r.identity_violations).sum();
    checks.push(LimitCheck {
        name: "delay_zero_identity",
        status: status(violations == 0),
        detail: format!("{violations} paths with (D=0) != (B<=0)"),
    });

    let worst_b = rungs
        .iter()
        .map(|r| {
            let bias = (r.exact_drift - (lambda - q)).abs();
            (r.backlog_per_slot.0 - (lambda - q)).abs() - 3.0 * se(r.backlog_per_slot.1) - bias
        })
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(LimitCheck {
        name: "mean_backlog_rate",
        status: status(worst_b <= 1e-12),
        detail: format!("E[B/t] vs λ-Q = {:.6}; worst excess over 3 SE {:.3e}", lambda - q, worst_b.max(0.0)),
    });

    let target = lambda.min(q);
    let worst_o = rungs
        .iter()
        .map(|r| {
            let t = r.horizon as f64;
            let bias = (r.exact_drift - (lambda - q)).abs();
            // E[min(X,Y)] = (E X + E Y - E|X-Y|)/2, and E|X-Y| <= |E(X-Y)| + sd(X-Y).
            let gap = r.backlog_sd / (2.0 * t) + bias;
            (r.output_per_slot.0 - target).abs() - 3.0 * se(r.output_per_slot.1) - gap
        })
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(LimitCheck {
        name: "mean_output_rate",
        status: status(worst_o <= 1e-12),
        detail: format!("E[A*/t] vs min(λ,Q) = {target:.6}; worst excess {:.3e}", worst_o.max(0.0)),
    });

    let p0: Vec<Estimate> = rungs.iter().map(|r| r.prob_delay_zero).collect();
    let balanced = (lambda - q).abs() <= 1e-12 * lambda.abs().max(q.abs()).max(1.0);
    let (ok, what) = if balanced {
        (p0.iter().all(|p| p.value > 0.0), "λ=Q: Pr(D=0) stays positive")
    } else if lambda > q {
        (
            p0.windows(2).all(|w| w[1].value <= w[0].value + w[0].half_width + w[1].half_width),
            "λ>Q: Pr(D=0) nonincreasing toward 0",
        )
    } else {
        (
            p0.windows(2).all(|w| w[1].value + w[0].half_width + w[1].half_width >= w[0].value),
            "λ<Q: Pr(D=0) nondecreasing toward 1",
        )
    };
    let series: Vec<String> = p0.iter().map(|p| format!("{:.4}", p.value)).collect();
    checks.push(LimitCheck {
        name: "delay_zero_trend",
        status: status(ok),
        detail: format!("{what}; [{}]", series.join(", ")),
    });

    if lambda < q && !balanced {
        let last = rungs.last().unwrap();
        let ratio = last.backlog_per_slot.0 / lambda;
        let ok = last.mean_delay.0 >= 0.0 && ratio < 0.0;
        checks.push(LimitCheck {
            name: "little_law_mismatch",
            status: status(ok),
            detail: format!("E[D]={:.4} >= 0 while E[B]/(E[A]/t)={ratio:.4} < 0", last.mean_delay.0),
        });
    } else {
        checks.push(LimitCheck {
            name: "little_law_mismatch",
            status: CheckStatus::NotApplicable,
            detail: "only stated for λ<Q".into(),
        });
    }

    Ok(LimitReport {
        lambda,
        q,
        rungs,
        checks,
    })
}
