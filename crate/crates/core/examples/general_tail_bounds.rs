//! Transient tail bounds that hold for any independent arrival and capacity
//! processes, for the classical and the quantum queue side by side.

use quantum_queue::bounds::{tail_curve, Measure, Scenario, ThetaGrid, DEFAULT_HOLDER_GRID};
use quantum_queue::processes::{IncrementDistribution, Process};
use quantum_queue::queue::run_ensemble;

fn main() -> quantum_queue::Result<()> {
    let t = 500;
    let arrival = Process::Iid(IncrementDistribution::poisson(1.0)?);
    let capacity = Process::Iid(IncrementDistribution::finite_support(vec![-1.0, 2.0, 3.0], vec![0.1, 0.5, 0.4])?);
    let grid = ThetaGrid::default();

    let quantum = Scenario::quantum(arrival.clone(), capacity.clone(), t)?;
    let classical = Scenario::classical(arrival, quantum.service().clone(), t)?;
    for scn in [&classical, &quantum] {
        let stats = run_ensemble(scn, 10_000, 9)?;
        println!("{} queue", scn.regime().as_str());
        for (measure, xs) in [
            (Measure::Backlog, vec![2.0, 5.0, 10.0]),
            (Measure::Delay, vec![1.0, 3.0, 6.0]),
            (Measure::Throughput, vec![540.0, 560.0, 580.0]),
        ] {
            let curve = tail_curve(scn, measure, &xs, &grid, &DEFAULT_HOLDER_GRID)?;
            for p in &curve.points {
                println!(
                    "  Pr({} > {:>5}) <= {:.3e} (θ = {:.4}{}), empirical {:.3e}",
                    measure.as_str(),
                    p.argument,
                    p.value,
                    p.theta.unwrap_or(f64::NAN),
                    p.p.map(|p| format!(", p = {p}")).unwrap_or_default(),
                    stats.tail(measure, p.argument).value
                );
            }
        }
    }
    Ok(())
}
