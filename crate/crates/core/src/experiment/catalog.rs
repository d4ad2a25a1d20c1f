//! Reference scenarios shipped with the crate.

use super::config::{parse_config, ExperimentConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub text: &'static str,
}

impl CatalogEntry {
    pub fn config(&self) -> Result<ExperimentConfig> {
        parse_config(self.text).map_err(|e| e.context(format!("catalog entry {}", self.name)))
    }

    pub fn description(&self) -> String {
        self.config().map(|c| c.description).unwrap_or_default()
    }
}

pub const CATALOG: [CatalogEntry; 5] = [
    CatalogEntry {
        name: "critical-backlog",
        text: include_str!("../../scenarios/critical-backlog.conf"),
    },
    CatalogEntry {
        name: "overload-delay",
        text: include_str!("../../scenarios/overload-delay.conf"),
    },
    CatalogEntry {
        name: "underload-throughput",
        text: include_str!("../../scenarios/underload-throughput.conf"),
    },
    CatalogEntry {
        name: "classical-poisson",
        text: include_str!("../../scenarios/classical-poisson.conf"),
    },
    CatalogEntry {
        name: "map-2state",
        text: include_str!("../../scenarios/map-2state.conf"),
    },
];

pub fn list_scenarios() -> &'static [CatalogEntry] {
    &CATALOG
}

pub fn lookup(name: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Precondition(format!("no shipped scenario named `{name}`")))
}
