//! Machine-readable command reports.
//!
//! Reports serialize deterministically: struct fields in declaration
//! order, maps sorted by key (serde_json's default), and no timestamps or
//! timing unless explicitly requested. The exit status is derivable from
//! the report alone.

use serde::Serialize;

use crate::resolve::{CheckEntry, LawResult};

/// Overall verdict of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Laws verified or object found.
    Verified,
    /// Laws refuted or search exhausted; never a resource verdict.
    Refuted,
    /// Usage, parse or resolution error.
    Error,
    /// A budget refused the computation; distinct from refutation.
    BudgetExceeded,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Refuted => 1,
            Status::Error => 2,
            Status::BudgetExceeded => 3,
        }
    }
}

/// A command report with stable field order.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub laws: Vec<LawResult>,
    pub derived: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: Vec<String>) -> Report {
        Report {
            command: command.into(),
            inputs,
            status: Status::Verified,
            diagnostics: Vec::new(),
            checks: Vec::new(),
            laws: Vec::new(),
            derived: serde_json::json!({}),
            timing_ms: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Human-readable rendering, one line per law.
    pub fn human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        if !self.inputs.is_empty() {
            out.push_str(&format!("inputs: {}\n", self.inputs.join(", ")));
        }
        for d in &self.diagnostics {
            out.push_str(&format!("error: {d}\n"));
        }
        for check in &self.checks {
            let verdict = if check.passed() { "ok" } else { "FAIL" };
            out.push_str(&format!("{} {} [{}]\n", verdict, check.name, check.kind));
            for law in &check.laws {
                if !law.pass {
                    out.push_str(&format!(
                        "    FAIL {}: {}\n",
                        law.name,
                        law.witness.as_deref().unwrap_or("")
                    ));
                }
            }
            if check.derived != serde_json::json!({}) {
                out.push_str(&format!("    {}\n", compact(&check.derived)));
            }
        }
        for law in &self.laws {
            if law.pass {
                out.push_str(&format!("pass {}\n", law.name));
            } else {
                out.push_str(&format!(
                    "FAIL {}: {}\n",
                    law.name,
                    law.witness.as_deref().unwrap_or("")
                ));
            }
        }
        if self.derived != serde_json::json!({}) {
            out.push_str(&format!("derived: {}\n", compact(&self.derived)));
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("timing: {ms} ms\n"));
        }
        out.push_str(&format!(
            "status: {}\n",
            match self.status {
                Status::Verified => "verified",
                Status::Refuted => "refuted",
                Status::Error => "error",
                Status::BudgetExceeded => "budget-exceeded",
            }
        ));
        out
    }
}

fn compact(value: &serde_json::Value) -> String {
    serde_json::to_string(value).expect("values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_match_the_contract() {
        assert_eq!(Status::Verified.exit_code(), 0);
        assert_eq!(Status::Refuted.exit_code(), 1);
        assert_eq!(Status::Error.exit_code(), 2);
        assert_eq!(Status::BudgetExceeded.exit_code(), 3);
    }

    #[test]
    fn json_is_deterministic() {
        let mut report = Report::new("check", vec!["two.qlab".into()]);
        report.derived = serde_json::json!({"b": 1, "a": 2});
        let first = report.to_json();
        let second = report.to_json();
        assert_eq!(first, second);
        // map keys are sorted
        let a_pos = first.find("\"a\"").unwrap();
        let b_pos = first.find("\"b\"").unwrap();
        assert!(a_pos < b_pos);
    }

    #[test]
    fn timing_is_omitted_unless_requested() {
        let report = Report::new("check", vec![]);
        assert!(!report.to_json().contains("timing"));
    }
}
