//! Sample-path queue dynamics and Monte Carlo ensembles.

mod ensemble;
mod limits;
mod trajectory;

pub use ensemble::{run_ensemble, run_ensemble_range, EnsembleStats, Estimate, DEFAULT_Z};
pub use limits::{check_limit_theorems, CheckStatus, LimitCheck, LimitReport, LimitRung, DEFAULT_LADDER};
pub use trajectory::{delay_from_cumulative, step_classical, step_quantum, QueueTrajectory};
