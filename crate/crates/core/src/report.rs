//! Structured verification outcomes.
//!
//! A [`Report`] is a flat list of check entries. Entries are emitted in a
//! stable order so that two runs with the same configuration and seed render
//! byte-identical output in either format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A finding that does not fail the run (e.g. a non-metric immediate distance).
    Warn,
    /// Preconditions not met; no claim was made.
    Skip,
    Info,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Warn => "warn",
            Status::Skip => "skip",
            Status::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Entry {
    pub fn new(id: impl Into<String>, status: Status) -> Self {
        Entry {
            id: id.into(),
            status,
            detail: String::new(),
            witness: None,
            timing_ms: None,
        }
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn witness<I, S>(mut self, items: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.witness = Some(items.into_iter().map(|s| s.to_string()).collect());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub title: String,
    #[serde(default)]
    pub config: BTreeMap<String, String>,
    #[serde(default)]
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            title: title.into(),
            config: BTreeMap::new(),
            entries: Vec::new(),
        }
    }

    pub fn with_config(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.config.insert(key.into(), value.to_string());
        self
    }

    pub fn push(&mut self, entry: Entry) {
        self.entries.push(entry);
    }

    pub fn check(&mut self, id: impl Into<String>, ok: bool, witness: Option<Vec<String>>) {
        let mut e = Entry::new(id, if ok { Status::Pass } else { Status::Fail });
        if !ok {
            e.witness = witness;
        }
        self.entries.push(e);
    }

    /// Appends another report's entries, prefixing their ids.
    pub fn merge(&mut self, prefix: &str, other: Report) {
        for mut e in other.entries {
            if !prefix.is_empty() {
                e.id = format!("{prefix}.{}", e.id);
            }
            self.entries.push(e);
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// 0 iff nothing failed; skips and warnings do not fail a run.
    pub fn exit_status(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn find(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} (cbm {})", self.title, self.tool_version);
        for (k, v) in &self.config {
            let _ = writeln!(out, "# {k} = {v}");
        }
        for e in &self.entries {
            let _ = write!(out, "{:<5} {}", e.status.as_str(), e.id);
            if !e.detail.is_empty() {
                let _ = write!(out, " :: {}", e.detail);
            }
            if let Some(w) = &e.witness {
                let _ = write!(out, " [witness: {}]", w.join(", "));
            }
            if let Some(t) = e.timing_ms {
                let _ = write!(out, " ({t:.3} ms)");
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "summary: {} pass, {} fail, {} warn, {} skip",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Warn),
            self.count(Status::Skip)
        );
        out
    }
}
