//! Per-slot arrival and capacity processes: i.i.d. increments and
//! finite-state Markov additive processes, with their cumulant generating
//! functions, Perron-Frobenius eigenpairs, and seeded samplers.

mod distribution;
mod kernel;
mod process;
mod sampling;

pub use distribution::{Cgf, FiniteSupport, IncrementDistribution, NetIncrement, Poisson, PROB_SUM_TOL};
pub use kernel::{EigenPair, MapKernel, PF_MAX_ITERATIONS, PF_RAYLEIGH_TOL};
pub use process::Process;
pub use sampling::{path_rng, sample_path, SamplePath};
