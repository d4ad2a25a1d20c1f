//! Virtual delay of an overloaded quantum queue (arrivals at ten times the
//! capacity). The median of the band gives an estimate of the mean delay.

use quantum_queue::bounds::{band_curves, Measure, Scenario, ThetaGrid};
use quantum_queue::capacity::attenuation_quantum_capacity;
use quantum_queue::processes::{IncrementDistribution, Process};
use quantum_queue::queue::run_ensemble;

fn main() -> quantum_queue::Result<()> {
    let q = attenuation_quantum_capacity(10.0, 50.0)?;
    let t = 1000;
    let scn = Scenario::quantum(
        Process::Iid(IncrementDistribution::poisson(10.0 * q)?),
        Process::constant(q)?,
        t,
    )?;

    let ds: Vec<f64> = (0..t).map(|d| d as f64).collect();
    let band = band_curves(&scn, Measure::Delay, &ds, &ThetaGrid::default())?;
    // E[D] = Σ_{d<t} Pr(D > d)
    let implied: f64 = band.median.points.iter().map(|p| 1.0 - p.value).sum();

    let stats = run_ensemble(&scn, 20_000, 7)?;
    let (mean, se) = stats.mean(Measure::Delay);
    println!("E[D] from band median: {implied:.2}");
    println!("E[D] Monte Carlo:      {mean:.2} ± {se:.2}");
    for d in [880.0, 890.0, 900.0, 910.0, 920.0] {
        let i = d as usize;
        let e = stats.cdf(Measure::Delay, d);
        println!(
            "  Pr(D <= {d}) in [{:.4}, {:.4}], empirical {:.4}",
            band.lower.points[i].value, band.upper.points[i].value, e.value
        );
    }
    Ok(())
}
