//! Lundberg exponents and the resulting steady-state backlog and delay tails
//! of a classical queue.

use quantum_queue::bounds::{iid_lundberg_bound, lundberg_root, map_lundberg_arrival_side};
use quantum_queue::processes::{IncrementDistribution, MapKernel, NetIncrement};

fn main() -> quantum_queue::Result<()> {
    let arrival = IncrementDistribution::poisson(1.0)?;
    let capacity = IncrementDistribution::Constant(2.0);

    // root of κ_A(θ) + κ_C(-θ) = 0
    let theta = lundberg_root(&NetIncrement::new(arrival.clone(), capacity.clone()))?;
    println!("Poisson(1) against C = 2: θ* = {theta:.9}");

    let b = iid_lundberg_bound(&arrival, &capacity)?;
    for x in [1.0, 5.0, 10.0] {
        println!("  Pr(B > {x:>4}) <= {:.3e}   Pr(D > {x:>4}) <= {:.3e}", b.backlog_tail(x), b.delay_tail(x));
    }

    // on-off source: bursts of 3 in state 1
    let kernel = MapKernel::state_dependent(
        vec![vec![0.9, 0.1], vec![0.2, 0.8]],
        vec![IncrementDistribution::Constant(0.0), IncrementDistribution::Constant(3.0)],
    )?;
    println!("on-off source, mean rate {:.4}, capacity 1.5", kernel.stationary_mean());
    for init in 0..2 {
        let m = map_lundberg_arrival_side(&kernel, 1.5, init)?;
        println!("  J0 = {init}: θ* = {:.6}, prefactor {:.4}, Pr(B > 20) <= {:.3e}", m.theta, m.prefactor, m.backlog_tail(20.0));
    }
    Ok(())
}
