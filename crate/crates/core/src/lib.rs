//! Queueing of classical and quantum information over quantum channels.
//!
//! [`capacity`] gives per-slot channel capacities, [`processes`] the arrival
//! and capacity increment models, [`bounds`] the analytic tail and
//! distribution bounds, [`queue`] sample-path dynamics and Monte Carlo
//! ensembles, and [`experiment`] the config-driven runner behind the `qqueue`
//! binary.

// `!(x > 0.0)` is used on purpose so that NaN lands in the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Small dense matrices read better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod capacity;
pub mod error;
pub mod experiment;
pub mod numeric;
pub mod processes;
pub mod queue;

pub use error::{Error, Result};
