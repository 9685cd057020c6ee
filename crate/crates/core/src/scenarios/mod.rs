// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end worked examples, each producing a [`ScenarioReport`] whose
//! checks carry their tolerance and where the expected value comes from.

mod correspondence;
mod decoherence;
mod epr;
mod teleport;

use std::fmt::Write as _;

use serde::Serialize;

pub use correspondence::{correspondence_scenario, frequency_ratio};
pub use decoherence::{decoherence_scenario, pointer_coherence, DecoherenceParams};
pub use epr::{epr_dynamics, epr_layout, epr_scenario, epr_states, EprDynamics};
pub use teleport::{
    bell_state, correction, teleport_histogram, teleport_run, teleportation_scenario, TeleportRun, TeleportSetup,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Number(f64),
    Numbers(Vec<f64>),
    Text(String),
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Number(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::Int(x as i64)
    }
}

impl From<Vec<f64>> for Value {
    fn from(x: Vec<f64>) -> Self {
        Value::Numbers(x)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Number(x) => write!(f, "{x:.6e}"),
            Value::Numbers(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| format!("{x:.6}")).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            Value::Text(s) => f.write_str(s),
        }
    }
}

/// A labeled input or derived number. Exact quantities have tolerance 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: Value,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub passed: bool,
    pub tolerance: f64,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub inputs: Vec<Quantity>,
    pub derived: Vec<Quantity>,
    pub checks: Vec<Check>,
}

impl ScenarioReport {
    pub fn new(name: &str) -> Self {
        ScenarioReport { name: name.into(), inputs: Vec::new(), derived: Vec::new(), checks: Vec::new() }
    }

    pub fn input(&mut self, name: &str, value: impl Into<Value>) {
        self.inputs.push(Quantity { name: name.into(), value: value.into(), tolerance: 0.0 });
    }

    pub fn derive(&mut self, name: &str, value: impl Into<Value>, tolerance: f64) {
        self.derived.push(Quantity { name: name.into(), value: value.into(), tolerance });
    }

    /// `|actual - expected| <= tolerance`.
    pub fn check_close(&mut self, name: &str, expected: f64, actual: f64, tolerance: f64, provenance: &str) {
        let passed = (actual - expected).abs() <= tolerance;
        self.push(name, expected.into(), actual.into(), passed, tolerance, provenance);
    }

    /// `actual <= bound`.
    pub fn check_at_most(&mut self, name: &str, bound: f64, actual: f64, provenance: &str) {
        let passed = actual <= bound;
        self.push(name, Value::Text(format!("<= {bound:.6e}")), actual.into(), passed, bound, provenance);
    }

    pub fn check_eq(&mut self, name: &str, expected: impl Into<Value>, actual: impl Into<Value>, provenance: &str) {
        let (expected, actual) = (expected.into(), actual.into());
        let passed = expected == actual;
        self.push(name, expected, actual, passed, 0.0, provenance);
    }

    fn push(&mut self, name: &str, expected: Value, actual: Value, passed: bool, tolerance: f64, provenance: &str) {
        self.checks.push(Check { name: name.into(), expected, actual, passed, tolerance, provenance: provenance.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("== {} ==\n", self.name);
        for (title, items) in [("inputs", &self.inputs), ("derived", &self.derived)] {
            if items.is_empty() {
                continue;
            }
            let _ = writeln!(out, "{title}:");
            for q in items {
                let _ = if q.tolerance > 0.0 {
                    writeln!(out, "  {:<40} {} (tol {:.1e})", q.name, q.value, q.tolerance)
                } else {
                    writeln!(out, "  {:<40} {}", q.name, q.value)
                };
            }
        }
        let _ = writeln!(out, "checks:");
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  [{mark}] {}: expected {}, got {} (tol {:.1e}; {})",
                c.name, c.expected, c.actual, c.tolerance, c.provenance
            );
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        out
    }
}
