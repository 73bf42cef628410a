//! Report model shared by all commands, with text and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use pertopo::Verdict;
use serde::Serialize;

/// How a reported value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Exact integer or rational computation.
    Exact,
    /// Decided by a group-theoretic oracle with a replayable witness.
    Certified,
    /// Computed on an abelianized or homological stand-in.
    Surrogate,
}

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub provenance: Provenance,
    pub summary: String,
    pub details: serde_json::Value,
}

impl Item {
    pub fn new(id: impl Into<String>, verdict: Option<Verdict>, provenance: Provenance, summary: impl Into<String>) -> Self {
        Item { id: id.into(), verdict, provenance, summary: summary.into(), details: serde_json::Value::Null }
    }

    pub fn details(mut self, details: impl Serialize) -> Self {
        self.details = serde_json::to_value(details).expect("reports serialize");
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub verified: usize,
    pub refuted: usize,
    pub inconclusive: usize,
    pub inapplicable: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub items: Vec<Item>,
    pub summary: Summary,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            items: Vec::new(),
            summary: Summary::default(),
            warnings: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn push(&mut self, item: Item) {
        match item.verdict {
            Some(Verdict::Verified) => self.summary.verified += 1,
            Some(Verdict::Refuted) => self.summary.refuted += 1,
            Some(Verdict::Inconclusive) => {
                self.summary.inconclusive += 1;
                self.warnings.push(format!("{}: inconclusive", item.id));
            }
            Some(Verdict::Inapplicable) => self.summary.inapplicable += 1,
            None => {}
        }
        self.items.push(item);
    }

    pub fn refuted(&self) -> bool {
        self.summary.refuted > 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "pertopo {} ({})", self.command, params.join(", "));
        for item in &self.items {
            let tag = item.verdict.map_or_else(|| "value".to_string(), |v| v.to_string());
            let prov = serde_json::to_value(item.provenance).expect("enum serializes");
            let _ = writeln!(out, "[{tag}] {}: {} ({})", item.id, item.summary, prov.as_str().unwrap_or_default());
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} verified, {} refuted, {} inconclusive, {} inapplicable",
            s.verified, s.refuted, s.inconclusive, s.inapplicable
        );
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "time: {ms} ms");
        }
        out
    }
}
