use std::collections::BTreeMap;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use trunclap_core::Status;

const TABLE: &str = include_str!("../data/expectations.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub subsolution: Status,
    pub supersolution: Status,
    pub solution: Status,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectationTable {
    pub version: u32,
    pub equation: String,
    /// Keyed by catalog family.
    pub candidates: BTreeMap<String, Expected>,
}

impl ExpectationTable {
    pub fn bundled() -> Result<Self> {
        serde_json::from_str(TABLE).context("bundled expectation table is malformed")
    }

    pub fn lookup(&self, family: &str) -> Result<Expected> {
        self.candidates
            .get(family)
            .copied()
            .with_context(|| format!("no expectation recorded for '{family}'"))
    }
}
