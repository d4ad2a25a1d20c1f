//! Throughput of an underloaded quantum queue: a high-probability guarantee
//! on cumulative output from the band, compared with the sampled quantile.

use quantum_queue::bounds::{band_curves, band_quantile, Measure, Scenario, ThetaGrid};
use quantum_queue::capacity::attenuation_quantum_capacity;
use quantum_queue::processes::{IncrementDistribution, Process};
use quantum_queue::queue::run_ensemble;

fn main() -> quantum_queue::Result<()> {
    let q = attenuation_quantum_capacity(10.0, 50.0)?;
    let t = 1000;
    let lambda = 0.5 * q;
    let scn = Scenario::quantum(
        Process::Iid(IncrementDistribution::poisson(lambda)?),
        Process::constant(q)?,
        t,
    )?;
    let grid = ThetaGrid::default();
    let stats = run_ensemble(&scn, 20_000, 11)?;
    let (rate, se) = stats.mean_per_slot(Measure::Throughput);
    println!("λ = {lambda:.5}, E[A*/t] = {rate:.5} ± {se:.5}");

    for eps in [1e-2, 1e-3, 1e-5] {
        let x = band_quantile(&scn, Measure::Throughput, eps, &grid, 0.0, t as f64 * q, 1e-6)?;
        println!(
            "  Pr(A* > x) <= {eps:e} for x = {x:.1} ({:.5} per slot); sampled 1-{eps:e} quantile {:.1}",
            x / t as f64,
            stats.quantile(Measure::Throughput, 1.0 - eps)
        );
    }

    let xs = [1000.0, 1050.0, 1100.0, 1150.0, 1200.0];
    let band = band_curves(&scn, Measure::Throughput, &xs, &grid)?;
    for (i, x) in xs.iter().enumerate() {
        println!(
            "  Pr(A* <= {x}) in [{:.4}, {:.4}], empirical {:.4}",
            band.lower.points[i].value,
            band.upper.points[i].value,
            stats.cdf(Measure::Throughput, *x).value
        );
    }
    Ok(())
}
