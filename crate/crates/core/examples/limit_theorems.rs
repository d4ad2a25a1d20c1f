//! Long-run behaviour of the quantum queue across horizons in the three
//! load regimes.

use quantum_queue::bounds::Scenario;
use quantum_queue::processes::{IncrementDistribution, Process};
use quantum_queue::queue::check_limit_theorems;

fn main() -> quantum_queue::Result<()> {
    // E[Q⁺] = 0.75 · 3 = 2.25
    for lambda in [1.5, 2.25, 3.0] {
        let scn = Scenario::quantum(
            Process::Iid(IncrementDistribution::poisson(lambda)?),
            Process::Iid(IncrementDistribution::finite_support(vec![-1.0, 3.0], vec![0.25, 0.75])?),
            1,
        )?;
        let report = check_limit_theorems(&scn, &[100, 1000, 5000], 1000, 17)?;
        print!("{report}");
        println!("all passed: {}\n", report.all_passed());
    }
    Ok(())
}
