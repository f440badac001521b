use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Error,
    SkippedBudget,
    /// Filtered out by `--section` or `--tier`.
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
            Status::SkippedBudget => "BUDGET",
            Status::Skipped => "SKIP",
        }
    }
}

/// A header row plus data rows, rendered by `--format tsv`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub kind: String,
    pub status: Status,
    pub wall_ms: f64,
    pub detail: Value,
    /// One-line human summary for `--format text`.
    #[serde(skip)]
    pub summary: String,
    #[serde(skip)]
    pub table: Option<Table>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub scenario: String,
    pub config: Value,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(scenario: &str, config: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            scenario: scenario.to_string(),
            config,
            checks: Vec::new(),
        }
    }

    /// 1 if anything failed or errored, 3 if budgets ran out, else 0.
    pub fn exit_code(&self) -> i32 {
        let has = |s: Status| self.checks.iter().any(|c| c.status == s);
        if has(Status::Fail) || has(Status::Error) {
            1
        } else if has(Status::SkippedBudget) {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            if self.checks.len() == 1 && c.status == Status::Pass {
                let _ = writeln!(out, "{}", c.summary);
                continue;
            }
            let _ = writeln!(
                out,
                "{:<6} {} ({:.1} ms){}{}",
                c.status.label(),
                c.name,
                c.wall_ms,
                if c.summary.is_empty() { "" } else { ": " },
                c.summary
            );
        }
        if self.checks.len() > 1 {
            let count = |s: Status| self.checks.iter().filter(|c| c.status == s).count();
            let _ = writeln!(
                out,
                "{} passed, {} failed, {} errors, {} over budget, {} skipped",
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Error),
                count(Status::SkippedBudget),
                count(Status::Skipped)
            );
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        if let [only] = self.checks.as_slice() {
            if let Some(t) = &only.table {
                let _ = writeln!(out, "{}", t.header.join("\t"));
                for row in &t.rows {
                    let _ = writeln!(out, "{}", row.join("\t"));
                }
                return out;
            }
        }
        out.push_str("name\tkind\tstatus\twall_ms\tsummary\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{:.3}\t{}",
                c.name,
                c.kind,
                c.status.label().to_lowercase(),
                c.wall_ms,
                c.summary
            );
        }
        out
    }
}

/// Removes every `wall_ms` field so reports can be compared across runs.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("wall_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}
