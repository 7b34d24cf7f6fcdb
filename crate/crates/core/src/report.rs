//! Structured pass/fail records produced by the verification routines.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReportStats {
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub budget_exceeded: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, serde_json::Value>,
    pub stats: ReportStats,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Report {
        Report {
            name: name.into(),
            pass: true,
            budget_exceeded: false,
            checks: Vec::new(),
            data: BTreeMap::new(),
            stats: ReportStats::default(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> bool {
        self.pass &= pass;
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
        pass
    }

    pub fn datum(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(key.to_string(), serde_json::to_value(value).expect("report datum serializes"));
    }

    /// Marks the report failed because a search ran out of budget.
    pub fn budget_hit(&mut self, what: impl Into<String>) {
        self.budget_exceeded = true;
        self.check("budget", false, what);
    }

    pub fn add_nodes(&mut self, nodes: u64) {
        *self.stats.nodes.get_or_insert(0) += nodes;
    }

    pub fn finish(mut self, elapsed: Duration) -> Report {
        self.stats.elapsed_ms = elapsed.as_millis() as u64;
        self
    }

    /// Folds another report's checks in, prefixing their names.
    pub fn absorb(&mut self, other: &Report) {
        for c in &other.checks {
            self.check(format!("{}/{}", other.name, c.name), c.pass, c.detail.clone());
        }
        self.budget_exceeded |= other.budget_exceeded;
        if let Some(n) = other.stats.nodes {
            self.add_nodes(n);
        }
    }
}
