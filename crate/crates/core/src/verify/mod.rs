//! Property checks for schedules and bid curves, a dynamic-programming
//! oracle, seeded instance generators and batch suites.

mod checks;
mod dp;
pub mod gen;
mod suite;

pub use checks::{
    check_additive_shift, check_complementarity, check_scaling_invariance, check_segment_bounds, check_staircase,
    check_structure, check_vertical_shift, null_stair_widths,
};
pub use dp::{dp_oracle, DpResult, MAX_DP_HORIZON};
pub use suite::{oracle_gaps, run_suite, Suite, SuiteReport, ORACLE_GAP_FLOOR};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

/// Enough to reproduce a failure: the instance name carries the generator
/// seed and kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub instance: String,
    pub c1: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub outcome: Outcome,
    pub witnesses: Vec<Witness>,
    pub tolerances: BTreeMap<String, f64>,
    /// Empirical notes that are not failures.
    pub observations: Vec<String>,
}

impl PropertyReport {
    pub fn new(property: impl Into<String>) -> Self {
        PropertyReport {
            property: property.into(),
            outcome: Outcome::Pass,
            witnesses: Vec::new(),
            tolerances: BTreeMap::new(),
            observations: Vec::new(),
        }
    }

    pub fn not_applicable(property: impl Into<String>, why: impl Into<String>) -> Self {
        let mut r = PropertyReport::new(property);
        r.outcome = Outcome::NotApplicable;
        r.observations.push(why.into());
        r
    }

    pub fn tol(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    pub fn fail(&mut self, c1: Option<f64>, detail: impl Into<String>) {
        self.outcome = Outcome::Fail;
        self.witnesses.push(Witness {
            instance: String::new(),
            c1,
            detail: detail.into(),
        });
    }

    pub fn observe(&mut self, note: impl Into<String>) {
        self.observations.push(note.into());
    }

    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail
    }

    /// Stamps every witness with the instance it came from.
    pub fn for_instance(mut self, instance: &str) -> Self {
        for w in &mut self.witnesses {
            if w.instance.is_empty() {
                w.instance = instance.to_string();
            }
        }
        self
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::NotApplicable => "N/A ",
        };
        write!(f, "{tag} {}", self.property)?;
        for w in &self.witnesses {
            write!(f, "\n    {} c1={:?}: {}", w.instance, w.c1, w.detail)?;
        }
        Ok(())
    }
}
