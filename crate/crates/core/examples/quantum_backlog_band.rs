//! Backlog band of a quantum queue whose arrival rate equals the quantum
//! capacity, next to a Monte Carlo estimate of the CDF.

use quantum_queue::bounds::{band_curves, Measure, Scenario, ThetaGrid};
use quantum_queue::capacity::attenuation_quantum_capacity;
use quantum_queue::numeric::linspace;
use quantum_queue::processes::{IncrementDistribution, Process};
use quantum_queue::queue::run_ensemble;

fn main() -> quantum_queue::Result<()> {
    let q = attenuation_quantum_capacity(10.0, 50.0)?;
    let t = 1000;
    let scn = Scenario::quantum(
        Process::Iid(IncrementDistribution::poisson(q)?),
        Process::constant(q)?,
        t,
    )?;
    let stats = run_ensemble(&scn, 20_000, 2021)?;
    println!("Q = {q:.6}, t = {t}, Pr(D = 0) = {:.4}", stats.prob_delay_zero().value);

    let xs = linspace(-150.0, 150.0, 13);
    let band = band_curves(&scn, Measure::Backlog, &xs, &ThetaGrid::default())?;
    println!("      x   lower   median  upper | empirical");
    for (i, &x) in xs.iter().enumerate() {
        let e = stats.cdf(Measure::Backlog, x);
        println!(
            "{x:>7.1}  {:.4}  {:.4}  {:.4} | {:.4} ± {:.4}",
            band.lower.points[i].value,
            band.median.points[i].value,
            band.upper.points[i].value,
            e.value,
            e.half_width
        );
    }
    Ok(())
}
