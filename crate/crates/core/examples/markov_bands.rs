//! Bands for Markov-modulated queues: a bursty source against a constant
//! capacity, and a constant source against a fading capacity.

use quantum_queue::bounds::{band_curves, band_family, Measure, Scenario, ThetaGrid};
use quantum_queue::processes::{IncrementDistribution, MapKernel, Process};
use quantum_queue::queue::run_ensemble;

fn show(name: &str, scn: &Scenario, xs: &[f64]) -> quantum_queue::Result<()> {
    let band = band_curves(scn, Measure::Backlog, xs, &ThetaGrid::default())?;
    let stats = run_ensemble(scn, 10_000, 3)?;
    println!("{name} ({:?} family)", band_family(scn));
    for (i, &x) in xs.iter().enumerate() {
        println!(
            "  Pr(B <= {x:>6}) in [{:.4}, {:.4}], empirical {:.4}",
            band.lower.points[i].value,
            band.upper.points[i].value,
            stats.cdf(Measure::Backlog, x).value
        );
    }
    Ok(())
}

fn main() -> quantum_queue::Result<()> {
    let t = 200;
    let modulation = vec![vec![0.9, 0.1], vec![0.2, 0.8]];
    let bursty = MapKernel::state_dependent(
        modulation.clone(),
        vec![IncrementDistribution::poisson(1.0)?, IncrementDistribution::poisson(3.0)?],
    )?;
    let scn = Scenario::quantum(Process::markov(bursty.clone(), 0)?, Process::constant(2.5)?, t)?;
    show("bursty Poisson source, Q = 2.5", &scn, &[-150.0, -100.0, -60.0, -20.0, 0.0])?;

    let both = Scenario::quantum(
        Process::markov(bursty, 0)?,
        Process::Iid(IncrementDistribution::finite_support(vec![-1.0, 3.0], vec![0.2, 0.8])?),
        t,
    )?;
    show("bursty source, i.i.d. capacity in {-1, 3}", &both, &[-150.0, -100.0, -60.0, -20.0, 0.0])?;

    // good/bad channel: capacity 3 or -1 depending on the channel state
    let fading = MapKernel::state_dependent(
        modulation,
        vec![IncrementDistribution::Constant(3.0), IncrementDistribution::Constant(-1.0)],
    )?;
    let scn = Scenario::quantum(Process::constant(1.2)?, Process::markov(fading, 0)?, t)?;
    show("constant source 1.2, fading capacity", &scn, &[-150.0, -100.0, -60.0, -40.0, -20.0])?;
    Ok(())
}
