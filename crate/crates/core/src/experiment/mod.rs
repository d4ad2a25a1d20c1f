//! Experiment configuration, the shipped scenario catalog, and the runner
//! that writes bound and Monte Carlo artifacts.

mod catalog;
mod config;
mod run;

pub use catalog::{list_scenarios, lookup, CatalogEntry, CATALOG};
pub use config::{
    parse_config, BoundsConfig, ExperimentConfig, GridSpec, LimitsConfig, MonteCarloConfig, ProcessSpec, RateSpec,
    StepSpec,
};
pub use run::{default_grid, run_experiment, ExperimentOutcome, Violation, VIOLATION_TOLERANCE};
