//! One sample path through both queue regimes: backlog, output and virtual
//! delay slot by slot.

use quantum_queue::bounds::Regime;
use quantum_queue::processes::{path_rng, IncrementDistribution, Process};
use quantum_queue::queue::QueueTrajectory;

fn main() -> quantum_queue::Result<()> {
    let t = 12;
    let arrival = Process::Iid(IncrementDistribution::poisson(1.0)?);
    let capacity = Process::Iid(IncrementDistribution::finite_support(vec![-1.0, 1.0, 2.0], vec![0.2, 0.5, 0.3])?);

    let mut a = vec![0.0; t];
    let mut q = vec![0.0; t];
    arrival.fill_increments(&mut path_rng(5, 0), &mut a, None);
    capacity.fill_increments(&mut path_rng(5, 1), &mut q, None);

    // the classical queue cannot use negative capacity at all
    let c: Vec<f64> = q.iter().map(|x| x.max(0.0)).collect();
    let classical = QueueTrajectory::new(Regime::Classical, a.clone(), c)?;
    let quantum = QueueTrajectory::new(Regime::Quantum, a.clone(), q.clone())?;
    let (dc, dq) = (classical.delays(), quantum.delays());

    println!("slot  a    Q  | B_cl  A*_cl D_cl | B_q   A*_q  D_q");
    for s in 1..=t {
        println!(
            "{s:>4} {:>3} {:>4} | {:>4} {:>5} {:>4} | {:>4} {:>5} {:>4}",
            a[s - 1],
            q[s - 1],
            classical.backlog()[s],
            classical.output()[s],
            dc[s],
            quantum.backlog()[s],
            quantum.output()[s],
            dq[s],
        );
    }
    Ok(())
}
