//! Per-slot capacities of the closed-form channel models.

use quantum_queue::capacity::{
    attenuation_quantum_capacity, broadband_lossy_capacity, freespace_capacity, freespace_y0, qubit_channel_optimum,
    ChannelSpec,
};

fn main() -> quantum_queue::Result<()> {
    println!("attenuation channel, l_a = 50");
    for l in [1.0, 10.0, 34.6, 50.0, 100.0] {
        let q = attenuation_quantum_capacity(l, 50.0)?;
        println!("  l = {l:>5}: Q = {q:+.6} qubits/slot, [Q]+ = {:.6}", q.max(0.0));
    }

    println!("broadband lossy, P/hbar = 10");
    for eta in [0.1, 0.5, 0.9, 1.0] {
        println!("  eta = {eta}: C = {:.6} bits/slot", broadband_lossy_capacity(eta, 10.0)?);
    }

    println!("free space, omega_c = 1");
    for p in [0.1, 1.0, 10.0] {
        println!("  P/P0 = {p}: y0 = {:.6}, C = {:.6}", freespace_y0(p)?, freespace_capacity(1.0, p)?);
    }

    let (p, q) = qubit_channel_optimum(0.3, 0.2);
    println!("qubit channel alpha=0.3 beta=0.2: optimum p = {p:.6}, Q = {q:.6}");

    let spec = ChannelSpec::Attenuation { l: 10.0, l_a: 50.0 };
    println!("{spec:?}: usable {:.6} ({:?})", spec.usable_capacity()?, spec.unit());
    Ok(())
}
