//! Dominant eigenpair of a tilted Markov additive kernel, checked against
//! repeated squaring of the kernel.

use quantum_queue::processes::{IncrementDistribution, MapKernel};

/// `log tr(F̂[θ]^(2^k))`, renormalising after every squaring.
fn log_trace_power(kernel: &MapKernel, theta: f64, k: u32) -> f64 {
    let (mut m, shift) = kernel.normalized_kernel(theta).unwrap();
    let n = m.len();
    let mut log_scale = shift;
    for _ in 0..k {
        let sq: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|l| m[i][l] * m[l][j]).sum()).collect())
            .collect();
        let top = sq.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
        m = sq.into_iter().map(|r| r.into_iter().map(|x| x / top).collect()).collect();
        log_scale = 2.0 * log_scale + top.ln();
    }
    log_scale + (0..n).map(|i| m[i][i]).sum::<f64>().ln()
}

fn main() -> quantum_queue::Result<()> {
    let kernel = MapKernel::state_dependent(
        vec![vec![0.9, 0.1], vec![0.2, 0.8]],
        vec![IncrementDistribution::Constant(1.0), IncrementDistribution::Constant(4.0)],
    )?;
    println!("stationary {:?}, mean increment {:.6}", kernel.stationary(), kernel.stationary_mean());
    for theta in [0.1, 0.5, 1.0] {
        let pf = kernel.pf_eigenpair(theta)?;
        let brute = log_trace_power(&kernel, theta, 11) / 2048.0;
        println!("θ = {theta}: κ = {:.12}, power = {brute:.12}", pf.kappa);
        println!("  h = {:?}, h0/min h = {:.4}, spread {:.4}", pf.h, pf.prefactor(0), pf.spread());
    }
    Ok(())
}
