use serde::Serialize;
use serde_json::{Map, Value};

use crate::fock::DefectReport;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, defect: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            defect,
            tolerance,
            pass: defect <= tolerance,
        }
    }

    /// A check that holds or fails outright; defect 0 or 1 against tolerance 0.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }
}

impl From<&DefectReport> for Check {
    fn from(r: &DefectReport) -> Self {
        Self {
            name: r.name.clone(),
            defect: r.defect,
            tolerance: r.tolerance,
            pass: r.pass,
        }
    }
}

/// Outcome of one command: parameters, phase, a list of checks and free-form artifacts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub params: Map<String, Value>,
    pub phase: String,
    pub checks: Vec<Check>,
    pub artifacts: Map<String, Value>,
}

impl VerificationReport {
    pub fn new(phase: impl Into<String>) -> Self {
        Self {
            params: Map::new(),
            phase: phase.into(),
            checks: Vec::new(),
            artifacts: Map::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn artifact(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.artifacts.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}
