//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line; the
//! process exits nonzero if any fails.

use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quantum_queue::bounds::*;
use quantum_queue::capacity::attenuation_quantum_capacity;
use quantum_queue::experiment::{lookup, run_experiment, ExperimentConfig};
use quantum_queue::numeric::linspace;
use quantum_queue::processes::{path_rng, Cgf, IncrementDistribution, MapKernel, NetIncrement, Process};
use quantum_queue::queue::{run_ensemble, EnsembleStats, QueueTrajectory};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn shipped(name: &str) -> ExperimentConfig {
    lookup(name).unwrap().config().unwrap()
}

/// Worst amount by which a band leaves the empirical CDF's `z`-SE interval.
fn band_excess(stats: &EnsembleStats, measure: Measure, xs: &[f64], band: &BandCurves) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let e = stats.cdf(measure, x);
        worst = worst
            .max(band.lower.points[i].value - (e.value + e.half_width))
            .max((e.value - e.half_width) - band.upper.points[i].value);
    }
    worst
}

fn criterion_1() -> Outcome {
    // η = e^{-1/5}; 1 - η by its alternating series, enough terms for 1e-17
    let mut one_minus_eta = 0.0;
    let mut term = 1.0;
    for k in 1..30 {
        term *= 0.2 / k as f64;
        one_minus_eta += if k % 2 == 1 { term } else { -term };
    }
    let oracle = -0.2 / std::f64::consts::LN_2 - one_minus_eta.log2();
    const FROZEN: f64 = 2.1752549000523902239899642986719821346119516223945;

    let start = Instant::now();
    let reps = 1000;
    let mut q = 0.0;
    for _ in 0..reps {
        q = attenuation_quantum_capacity(std::hint::black_box(10.0), 50.0).map_err(|e| e.to_string())?;
    }
    let per_call = start.elapsed().as_secs_f64() / reps as f64;
    let err = (q - oracle).abs().max((q - FROZEN).abs());
    let msg = format!("Q(l=10, l_a=50) = {q:.15}, |err| = {err:.1e} (tol 1e-9), {per_call:.1e} s/call (limit 1e-3)");
    if err < 1e-9 && per_call < 1e-3 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let scn = shipped("overload-delay").scenario().map_err(|e| e.to_string())?;
    let t = scn.horizon();
    let stats = run_ensemble(&scn, 100_000, 2021).map_err(|e| e.to_string())?;
    let (mean, se) = stats.mean(Measure::Delay);
    let ds: Vec<f64> = (0..=t).map(|d| d as f64).collect();
    let band = band_curves(&scn, Measure::Delay, &ds, &ThetaGrid::default()).map_err(|e| e.to_string())?;
    let excess = band_excess(&stats, Measure::Delay, &ds, &band);
    let elapsed = start.elapsed().as_secs_f64();
    let msg = format!(
        "E[D(1000)] = {mean:.2} ± {se:.2} (need [855, 945]); delay band worst excess over 3 SE {excess:.2e} on {} points; {elapsed:.1} s",
        ds.len()
    );
    if (855.0..=945.0).contains(&mean) && excess <= 0.0 && elapsed < 300.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_3() -> Outcome {
    let scn = shipped("critical-backlog").scenario().map_err(|e| e.to_string())?;
    let stats = run_ensemble(&scn, 100_000, 2021).map_err(|e| e.to_string())?;
    let (lo, hi) = (stats.min(Measure::Backlog), stats.max(Measure::Backlog));
    let pad = 0.2 * (hi - lo);
    let xs = linspace(lo - pad, hi + pad, 201);
    let band = band_curves(&scn, Measure::Backlog, &xs, &ThetaGrid::default()).map_err(|e| e.to_string())?;
    let excess = band_excess(&stats, Measure::Backlog, &xs, &band);
    let p0 = stats.prob_delay_zero();
    let msg = format!(
        "backlog band worst excess over 3 SE {excess:.2e} on {} points; Pr(D=0) = {:.4} ± {:.4} (need strictly inside (0,1))",
        xs.len(),
        p0.value,
        p0.half_width
    );
    if excess <= 0.0 && p0.value - p0.half_width > 0.0 && p0.value + p0.half_width < 1.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_4() -> Outcome {
    let scn = shipped("underload-throughput").scenario().map_err(|e| e.to_string())?;
    let t = scn.horizon() as f64;
    let lambda = scn.arrival().mean_rate();
    let stats = run_ensemble(&scn, 100_000, 2021).map_err(|e| e.to_string())?;
    let (rate, se) = stats.mean_per_slot(Measure::Throughput);
    let q = scn.service().mean_rate();
    let bound = band_quantile(&scn, Measure::Throughput, 1e-5, &ThetaGrid::default(), 0.0, t * q, 1e-6)
        .map_err(|e| e.to_string())?;
    let empirical = stats.quantile(Measure::Throughput, 1.0 - 1e-5);
    let msg = format!(
        "E[A*/t] = {rate:.5} ± {se:.5} vs λ = {lambda:.5} (tol 3 SE); 1e-5 quantile: bound {:.4} >= empirical {:.4} per slot",
        bound / t,
        empirical / t
    );
    if (rate - lambda).abs() <= 3.0 * se && bound >= empirical {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_5() -> Outcome {
    let arrival = IncrementDistribution::poisson(1.0).unwrap();
    let capacity = IncrementDistribution::Constant(2.0);
    let net = NetIncrement::new(arrival.clone(), capacity.clone());
    let theta = lundberg_root(&net).map_err(|e| e.to_string())?;
    let kappa = net.cgf(theta).map_err(|e| e.to_string())?;

    // independent bisection on e^θ - 1 - 2θ over (0.5, 3)
    let (mut lo, mut hi) = (0.5f64, 3.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid.exp() - 1.0 - 2.0 * mid < 0.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    let oracle = 0.5 * (lo + hi);

    let scn = Scenario::classical(Process::Iid(arrival), Process::Iid(capacity), 10_000).map_err(|e| e.to_string())?;
    let stats = run_ensemble(&scn, 100_000, 5).map_err(|e| e.to_string())?;
    let xs = linspace(0.0, stats.max(Measure::Backlog), 50);
    let mut worst = f64::NEG_INFINITY;
    for &x in &xs {
        let e = stats.tail(Measure::Backlog, x);
        worst = worst.max((e.value - e.half_width) - (-theta * x).exp());
    }
    let msg = format!(
        "θ* = {theta:.9} vs oracle {oracle:.9} and 1.256431 (tol 1e-5); |κ(θ*)| = {:.1e} (tol 1e-10); e^(-θ*x) worst shortfall vs empirical tail - 3 SE {worst:.2e} on 50 points",
        kappa.abs()
    );
    if (theta - 1.256431).abs() < 1e-5 && (theta - oracle).abs() < 1e-9 && kappa.abs() < 1e-10 && worst <= 0.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// `(1/2^k) log tr(F^(2^k))` for a 2-state kernel with state-entry increments `y`.
fn trace_rate(p: [[f64; 2]; 2], y: [f64; 2], theta: f64, k: u32) -> f64 {
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = p[i][j] * (theta * y[j]).exp();
        }
    }
    let mut log_scale = 0.0;
    for _ in 0..k {
        let mut sq = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                sq[i][j] = m[i][0] * m[0][j] + m[i][1] * m[1][j];
            }
        }
        let top = sq.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
        m = sq.map(|r| r.map(|x| x / top));
        log_scale = 2.0 * log_scale + top.ln();
    }
    (log_scale + (m[0][0] + m[1][1]).ln()) / 2f64.powi(k as i32)
}

fn criterion_6() -> Outcome {
    let p = [[0.9, 0.1], [0.2, 0.8]];
    let kernel = MapKernel::state_dependent(
        p.iter().map(|r| r.to_vec()).collect(),
        vec![IncrementDistribution::Constant(1.0), IncrementDistribution::Constant(4.0)],
    )
    .unwrap();
    let mut worst = 0.0f64;
    for theta in [0.1, 0.5, 1.0] {
        let pf = kernel.pf_eigenpair(theta).map_err(|e| e.to_string())?;
        worst = worst.max((pf.kappa - trace_rate(p, [1.0, 4.0], theta, 11)).abs());
    }

    // e^{θS(t) - tκ} h_{J_t} / h_{J_0} has mean one
    let (theta, t, n) = (0.1, 20, 200_000u64);
    let pf = kernel.pf_eigenpair(theta).map_err(|e| e.to_string())?;
    let proc_ = Process::markov(kernel, 0).unwrap();
    let mut inc = vec![0.0; t];
    let mut states = Vec::new();
    let m: Vec<f64> = (0..n)
        .map(|k| {
            proc_.fill_increments(&mut path_rng(6, k), &mut inc, Some(&mut states));
            (theta * inc.iter().sum::<f64>() - t as f64 * pf.kappa).exp() * pf.h[states[t]] / pf.h[states[0]]
        })
        .collect();
    let mean = m.iter().sum::<f64>() / n as f64;
    let se = (m.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64 / n as f64).sqrt();
    let msg = format!(
        "max |κ - log tr(F^2048)/2048| = {worst:.1e} (tol 1e-6); martingale mean {mean:.5} ± {se:.5} (tol 5 SE)"
    );
    if worst < 1e-6 && (mean - 1.0).abs() < 5.0 * se {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn band_diff(a: Band, b: Band) -> f64 {
    (a.lower - b.lower).abs().max((a.upper - b.upper).abs())
}

fn criterion_7() -> Outcome {
    let t = 200;
    let a = IncrementDistribution::poisson(1.3).unwrap();
    let q = IncrementDistribution::finite_support(vec![-1.0, 1.0, 2.5], vec![0.2, 0.5, 0.3]).unwrap();
    let one = |d: &IncrementDistribution| Process::markov(MapKernel::single_state(d.clone()), 0).unwrap();
    let iid = Scenario::quantum(Process::Iid(a.clone()), Process::Iid(q.clone()), t).unwrap();
    let map = Scenario::quantum(one(&a), one(&q), t).unwrap();
    // constant capacity, and constant arrivals
    let iid_c = Scenario::quantum(Process::Iid(a.clone()), Process::constant(1.7).unwrap(), t).unwrap();
    let map_c = Scenario::quantum(one(&a), Process::constant(1.7).unwrap(), t).unwrap();
    let iid_l = Scenario::quantum(Process::constant(1.1).unwrap(), Process::Iid(q.clone()), t).unwrap();
    let map_l = Scenario::quantum(Process::constant(1.1).unwrap(), one(&q), t).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut full, mut constant) = (0.0f64, 0.0f64);
    let iid_band = |s: &Scenario, m: Measure, x: f64, th: f64| -> Band {
        match m {
            Measure::Backlog => quantum_iid_backlog_band(s, x, th, th),
            Measure::Delay => quantum_iid_delay_band(s, x, th, th),
            Measure::Throughput => quantum_iid_throughput_band(s, x, th),
        }
        .unwrap()
    };
    for _ in 0..100 {
        let th = rng.random_range(0.01..3.0);
        let points = [
            (Measure::Backlog, rng.random_range(-300.0..300.0)),
            (Measure::Delay, rng.random_range(0..=t) as f64),
            (Measure::Throughput, rng.random_range(0.0..500.0)),
        ];
        for (m, x) in points {
            let b = quantum_map_bands(&map, m, x, th).map_err(|e| e.to_string())?;
            full = full.max(band_diff(b, iid_band(&iid, m, x, th)));
            for (ms, is) in [(&map_c, &iid_c), (&map_l, &iid_l)] {
                let b = quantum_map_constant_bands(ms, m, x, th).map_err(|e| e.to_string())?;
                constant = constant.max(band_diff(b, iid_band(is, m, x, th)));
            }
        }
    }
    let msg = format!(
        "1-state Markov vs i.i.d. bands: max diff {full:.1e}; constant-side vs i.i.d.: max diff {constant:.1e} (tol 1e-12, 100 points x 3 measures)"
    );
    if full <= 1e-12 && constant <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_8() -> Outcome {
    let quarter = |lo: i32, hi: i32| (lo * 4..=hi * 4).prop_map(|k| k as f64 / 4.0);
    let strategy = (1usize..60).prop_flat_map(move |t| {
        (prop::collection::vec(quarter(0, 4), t), prop::collection::vec(quarter(-3, 4), t))
    });
    let mut runner = TestRunner::new(Config {
        cases: 10_000,
        failure_persistence: None,
        ..Config::default()
    });
    let result = runner.run(&strategy, |(a, c)| {
        let clipped: Vec<f64> = c.iter().map(|x| x.max(0.0)).collect();
        let cl = QueueTrajectory::new(Regime::Classical, a.clone(), clipped).unwrap();
        let qu = QueueTrajectory::new(Regime::Quantum, a.clone(), c.clone()).unwrap();
        let inf = cl.classical_output();
        let (dc, dq) = (cl.delays(), qu.delays());
        let (mut ca, mut cq) = (0.0, 0.0);
        for t in 0..=a.len() {
            if t > 0 {
                ca += a[t - 1];
                cq += c[t - 1].max(0.0);
            }
            prop_assert_eq!(cl.backlog()[t], cl.classical_sup_backlog(t), "sup form");
            prop_assert_eq!(cl.output()[t], inf[t], "inf form");
            prop_assert_eq!(qu.output()[t], f64::min(ca, cq), "min form");
            for (traj, delays) in [(&cl, &dc), (&qu, &dq)] {
                for d in 0..=t {
                    prop_assert_eq!(
                        delays[t] <= d,
                        traj.cumulative_arrivals()[t - d] <= traj.output()[t],
                        "delay indicator"
                    );
                }
            }
            prop_assert_eq!(dq[t] == 0, qu.backlog()[t] <= 0.0, "D=0 iff B<=0");
        }
        Ok(())
    });
    // the ensemble path uses closed forms; recheck the identity there too
    let scn = Scenario::quantum(
        Process::Iid(IncrementDistribution::poisson(2.0).unwrap()),
        Process::Iid(IncrementDistribution::finite_support(vec![-1.0, 3.0], vec![0.25, 0.75]).unwrap()),
        500,
    )
    .unwrap();
    let mismatches = run_ensemble(&scn, 10_000, 8).map_err(|e| e.to_string())?.delay_identity_violations();
    match result {
        Ok(()) if mismatches == 0 => Ok(format!(
            "10000 random paths: sup/inf/min forms, delay indicator and D=0 iff B<=0 hold exactly; ensemble mismatches {mismatches}"
        )),
        Ok(()) => Err(format!("ensemble has {mismatches} paths with (D=0) != (B<=0)")),
        Err(e) => Err(format!("pathwise identity violated: {e}")),
    }
}

fn criterion_9() -> Outcome {
    let cfg = shipped("classical-poisson");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_experiment(&cfg, &a).map_err(|e| e.to_string())?;
    run_experiment(&cfg, &b).map_err(|e| e.to_string())?;
    let mut sizes = Vec::new();
    for f in ["bounds.csv", "empirical.csv"] {
        let (x, y) = (std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
        if x != y {
            return Err(format!("{f} differs between runs"));
        }
        sizes.push(format!("{f} {} bytes", x.len()));
    }
    Ok(format!("two runs of classical-poisson (seed {}): {} identical", cfg.monte_carlo.seed, sizes.join(", ")))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("capacity golden value", criterion_1),
        ("overloaded delay reproduction", criterion_2),
        ("critical-load backlog band", criterion_3),
        ("underloaded throughput", criterion_4),
        ("Lundberg root and steady-state tail", criterion_5),
        ("Perron-Frobenius machinery", criterion_6),
        ("one-state reductions", criterion_7),
        ("pathwise identities", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {} {name}: {msg} [{secs:.1} s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} [{secs:.1} s]", i + 1)
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
