//! Machine-readable run reports.
//!
//! Key order is fixed, so a report serializes byte-identically for fixed
//! inputs and seed apart from `elapsed_ms`.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: Value) -> Self {
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub parameters: Value,
    pub results: Value,
    pub elapsed_ms: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    /// A report whose verdict is the conjunction of `checks`.
    pub fn new(
        command: impl Into<String>,
        parameters: Value,
        results: Value,
        checks: Vec<Check>,
        elapsed_ms: u64,
    ) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            parameters,
            results,
            elapsed_ms,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are finite")
    }

    /// One `name,passed,detail` row per check, detail as compact JSON.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,passed,detail\n");
        for c in &self.checks {
            let detail = serde_json::to_string(&c.detail).expect("serializable");
            out.push_str(&format!(
                "{},{},\"{}\"\n",
                c.name,
                c.passed,
                detail.replace('"', "\"\"")
            ));
        }
        out
    }
}
