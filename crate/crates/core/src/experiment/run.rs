use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::{ExperimentConfig, GridSpec};
use crate::bounds::{
    band_curves, band_quantile, lundberg_curve, lundberg_for, lundberg_root, tail_curve, BoundCurve, Measure, Regime,
    Scenario, Side,
};
use crate::error::{Error, Result};
use crate::processes::{NetIncrement, Process};
use crate::queue::{check_limit_theorems, run_ensemble, EnsembleStats};

/// Fraction of checked bound rows allowed to fall outside the empirical
/// confidence interval before the run counts as a validity failure.
pub const VIOLATION_TOLERANCE: f64 = 0.01;

/// What a run produced.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub out_dir: PathBuf,
    pub curves: Vec<BoundCurve>,
    pub ensemble: EnsembleStats,
    pub checked_rows: usize,
    pub violations: Vec<Violation>,
    pub summary: String,
}

impl ExperimentOutcome {
    pub fn violation_fraction(&self) -> f64 {
        if self.checked_rows == 0 {
            0.0
        } else {
            self.violations.len() as f64 / self.checked_rows as f64
        }
    }

    pub fn is_valid(&self) -> bool {
        self.violation_fraction() < VIOLATION_TOLERANCE
    }
}

/// A bound row outside the empirical confidence interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub measure: Measure,
    pub side: Side,
    pub argument: f64,
    pub bound: f64,
    pub empirical: f64,
    pub half_width: f64,
}

/// Grid of `points` values over the empirical support widened by 20% of its
/// span on each side (delay clipped to `[0, t]`).
pub fn default_grid(stats: &EnsembleStats, measure: Measure, points: usize) -> GridSpec {
    let (lo, hi) = (stats.min(measure), stats.max(measure));
    let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
    let (mut start, mut end) = (lo - 0.2 * span, hi + 0.2 * span);
    if measure == Measure::Delay {
        start = start.max(0.0).floor();
        end = end.min(stats.horizon() as f64).ceil();
    }
    GridSpec { start, end, points }
}

fn arguments(cfg: &ExperimentConfig, stats: &EnsembleStats, measure: Measure) -> Vec<f64> {
    cfg.grid(measure)
        .unwrap_or_else(|| default_grid(stats, measure, 100))
        .values()
}

fn curves_for(cfg: &ExperimentConfig, scn: &Scenario, measure: Measure, args: &[f64], notes: &mut String) -> Result<Vec<BoundCurve>> {
    let mut out = Vec::new();
    let grid = &cfg.bounds.theta;
    match scn.regime() {
        Regime::Quantum => {
            let b = band_curves(scn, measure, args, grid)?;
            out.extend([b.lower, b.upper, b.median]);
        }
        Regime::Classical => match lundberg_curve(scn, measure, args, grid) {
            Ok(c) => out.push(c),
            Err(Error::NoRoot(m) | Error::Precondition(m) | Error::Degenerate(m)) => {
                writeln!(notes, "lundberg {} curve skipped: {m}", measure.as_str()).unwrap();
            }
            Err(e) => return Err(e),
        },
    }
    if cfg.bounds.general {
        out.push(tail_curve(scn, measure, args, grid, &cfg.bounds.holder_grid)?);
    }
    Ok(out)
}

fn check_curve(curve: &BoundCurve, stats: &EnsembleStats, violations: &mut Vec<Violation>) -> usize {
    let mut checked = 0;
    for p in &curve.points {
        let cdf = stats.cdf(curve.measure, p.argument);
        let (bad, emp) = match curve.side {
            Side::LowerOnCdf => (p.value > cdf.value + cdf.half_width + 1e-12, cdf.value),
            Side::UpperOnCdf => (p.value < cdf.value - cdf.half_width - 1e-12, cdf.value),
            Side::UpperOnTail => (p.value < (1.0 - cdf.value) - cdf.half_width - 1e-12, 1.0 - cdf.value),
            Side::Median => continue,
        };
        checked += 1;
        if bad {
            violations.push(Violation {
                measure: curve.measure,
                side: curve.side,
                argument: p.argument,
                bound: p.value,
                empirical: emp,
                half_width: cdf.half_width,
            });
        }
    }
    checked
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_bounds(path: &Path, curves: &[BoundCurve]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["measure", "side", "argument", "bound", "theta", "p", "vacuous_flag"])?;
    for c in curves {
        for p in &c.points {
            w.write_record([
                c.measure.as_str().to_string(),
                c.side.as_str().to_string(),
                p.argument.to_string(),
                p.value.to_string(),
                opt(p.theta),
                opt(p.p),
                p.vacuous.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_empirical(path: &Path, grids: &[(Measure, Vec<f64>)], stats: &EnsembleStats) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["measure", "argument", "estimate", "ci_halfwidth", "n_paths"])?;
    let n = stats.num_paths().to_string();
    for (m, args) in grids {
        for &x in args {
            let e = stats.cdf(*m, x);
            w.write_record([
                m.as_str().to_string(),
                x.to_string(),
                e.value.to_string(),
                e.half_width.to_string(),
                n.clone(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn lundberg_note(scn: &Scenario) -> String {
    match scn.regime() {
        Regime::Classical => match lundberg_for(scn) {
            Ok(b) => format!("θ* = {} (prefactor {}, delay rate {})", b.theta, b.prefactor, b.delay_rate),
            Err(e) => format!("none ({e})"),
        },
        Regime::Quantum => match (scn.arrival().as_iid(), scn.service().as_iid()) {
            (Some(a), Some(q)) => match lundberg_root(&NetIncrement::new(a.clone(), q.clone())) {
                Ok(th) => format!("θ* = {th} for the increment a - [Q]^+"),
                Err(e) => format!("none ({e})"),
            },
            _ => match scn.arrival().as_constant().or(scn.service().as_constant()) {
                Some(_) => {
                    let (k, i) = scn.arrival().to_markov();
                    match scn.service().as_constant() {
                        Some(c) => match crate::bounds::map_lundberg_arrival_side(&k, c, i) {
                            Ok(b) => format!("θ* = {} (prefactor {})", b.theta, b.prefactor),
                            Err(e) => format!("none ({e})"),
                        },
                        None => "not computed (Markov capacity)".into(),
                    }
                }
                None => "not computed (both sides Markov)".into(),
            },
        },
    }
}

fn pf_note(label: &str, p: &Process, out: &mut String) {
    if let Process::Markov { kernel, .. } = p {
        for th in [0.1, 0.5, 1.0] {
            match kernel.pf_eigenpair(th) {
                Ok(e) => writeln!(out, "  {label} κ({th}) = {} h = {:?}", e.kappa, e.h).unwrap(),
                Err(e) => writeln!(out, "  {label} κ({th}): {e}").unwrap(),
            }
        }
    }
}

/// Runs the ensemble and every configured bound, writes `bounds.csv`,
/// `empirical.csv` and `summary.txt` into `out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<ExperimentOutcome> {
    let scn = cfg.scenario()?;
    let stats = run_ensemble(&scn, cfg.monte_carlo.paths, cfg.monte_carlo.seed)?.with_z(cfg.monte_carlo.z);
    let mut notes = String::new();
    let mut curves = Vec::new();
    let mut grids = Vec::new();
    for &m in &cfg.bounds.measures {
        let args = arguments(cfg, &stats, m);
        curves.extend(curves_for(cfg, &scn, m, &args, &mut notes).map_err(|e| e.context(format!("{} bounds", m.as_str())))?);
        grids.push((m, args));
    }
    let mut violations = Vec::new();
    let checked_rows = curves.iter().map(|c| check_curve(c, &stats, &mut violations)).sum();

    fs::create_dir_all(out_dir)?;
    write_bounds(&out_dir.join("bounds.csv"), &curves)?;
    write_empirical(&out_dir.join("empirical.csv"), &grids, &stats)?;

    let mut s = String::new();
    writeln!(s, "# scenario").unwrap();
    s.push_str(&cfg.render());
    writeln!(s, "\n# ensemble").unwrap();
    writeln!(s, "paths {} seed {} horizon {}", stats.num_paths(), cfg.monte_carlo.seed, stats.horizon()).unwrap();
    writeln!(s, "arrival mean rate {}", scn.arrival().mean_rate()).unwrap();
    writeln!(s, "service mean rate {}", scn.service().mean_rate()).unwrap();
    for m in Measure::ALL {
        let (mean, se) = stats.mean(m);
        writeln!(s, "E[{}] = {mean} ± {se}", m.as_str()).unwrap();
    }
    writeln!(s, "\n# lundberg").unwrap();
    writeln!(s, "{}", lundberg_note(&scn)).unwrap();
    writeln!(s, "\n# perron-frobenius").unwrap();
    let before = s.len();
    pf_note("arrival", scn.arrival(), &mut s);
    pf_note("capacity", scn.service(), &mut s);
    if s.len() == before {
        writeln!(s, "no Markov additive components").unwrap();
    }

    if scn.regime() == Regime::Quantum {
        let t = scn.horizon();
        if cfg.bounds.measures.contains(&Measure::Delay) {
            let ds: Vec<f64> = (0..t).map(|d| d as f64).collect();
            let b = band_curves(&scn, Measure::Delay, &ds, &cfg.bounds.theta)?;
            let implied: f64 = b.median.points.iter().map(|p| 1.0 - p.value).sum();
            writeln!(s, "\n# delay").unwrap();
            writeln!(s, "mean delay implied by the median band {implied}").unwrap();
            writeln!(s, "empirical mean delay {}", stats.mean(Measure::Delay).0).unwrap();
        }
        if cfg.bounds.measures.contains(&Measure::Throughput) {
            let v = cfg.bounds.violation;
            let rate = scn.arrival().mean_rate().max(scn.service().mean_rate());
            let xb = band_quantile(&scn, Measure::Throughput, v, &cfg.bounds.theta, 0.0, rate * t as f64, 1e-9)?;
            writeln!(s, "\n# throughput").unwrap();
            writeln!(s, "bound quantile at violation {v}: A*/t <= {}", xb / t as f64).unwrap();
            writeln!(s, "empirical {} quantile: A*/t = {}", 1.0 - v, stats.quantile(Measure::Throughput, 1.0 - v) / t as f64).unwrap();
        }
    }

    writeln!(s, "\n# limits").unwrap();
    if scn.regime() == Regime::Quantum && cfg.limits.enabled {
        let r = check_limit_theorems(&scn, &cfg.limits.ladder, cfg.limits.paths, cfg.monte_carlo.seed)?;
        write!(s, "{r}").unwrap();
    } else {
        writeln!(s, "not run").unwrap();
    }

    writeln!(s, "\n# validity").unwrap();
    writeln!(s, "{} of {} bound rows outside the empirical interval", violations.len(), checked_rows).unwrap();
    for v in violations.iter().take(20) {
        writeln!(
            s,
            "  {} {} at {}: bound {} vs empirical {} ± {}",
            v.measure.as_str(),
            v.side.as_str(),
            v.argument,
            v.bound,
            v.empirical,
            v.half_width
        )
        .unwrap();
    }
    s.push_str(&notes);
    fs::write(out_dir.join("summary.txt"), &s)?;

    Ok(ExperimentOutcome {
        out_dir: out_dir.to_path_buf(),
        curves,
        ensemble: stats,
        checked_rows,
        violations,
        summary: s,
    })
}
