//! TOML scenarios: a named list of checks plus default budgets.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use qfsplit_core::{Budget, Error};

use crate::args::Tier;
use crate::checks::CheckOp;
use crate::error::{CliError, CliResult};
use crate::report::{CheckRecord, Report, Status};

/// The bundled scenario re-verifying every fixture.
pub const PAPER_SCENARIO: &str = include_str!("../scenarios/paper.toml");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckTier {
    #[default]
    Default,
    /// Only with `--tier full`.
    Slow,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
pub struct ScenarioBudget {
    pub seconds: Option<f64>,
    pub terms: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct CheckSpec {
    pub name: String,
    pub section: String,
    #[serde(default)]
    pub tier: CheckTier,
    #[serde(flatten)]
    pub op: CheckOp,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub budget: ScenarioBudget,
    #[serde(rename = "check")]
    pub checks: Vec<CheckSpec>,
}

impl Scenario {
    pub fn parse(text: &str) -> CliResult<Self> {
        let s: Scenario =
            toml::from_str(text).map_err(|e| CliError::Config(format!("scenario: {e}")))?;
        let mut seen = HashSet::new();
        for c in &s.checks {
            if !seen.insert(c.name.as_str()) {
                return Err(CliError::Config(format!(
                    "duplicate check name `{}`",
                    c.name
                )));
            }
            c.op.validate()
                .map_err(|e| CliError::Config(format!("check `{}`: {e}", c.name)))?;
        }
        Ok(s)
    }

    pub fn paper() -> Self {
        Scenario::parse(PAPER_SCENARIO).expect("bundled scenario is valid")
    }

    pub fn sections(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for c in &self.checks {
            if !out.contains(&c.section.as_str()) {
                out.push(&c.section);
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub section: Option<String>,
    pub tier: Option<Tier>,
    pub seconds: Option<f64>,
    pub terms: Option<usize>,
}

fn run_check(spec: &CheckSpec, seconds: Option<f64>, terms: Option<usize>) -> CheckRecord {
    let started = Instant::now();
    let budget = Budget {
        max_terms: terms,
        deadline: seconds.map(|s| started + Duration::from_secs_f64(s)),
    };
    let result = spec.op.execute(&budget);
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    let (status, detail, summary) = match result {
        Ok(o) => (
            if o.pass { Status::Pass } else { Status::Fail },
            o.detail,
            o.summary,
        ),
        Err(Error::ResourceBudgetExceeded(why)) => (
            Status::SkippedBudget,
            json!({ "error": why }),
            format!("budget exhausted: {why}"),
        ),
        Err(e) => (
            Status::Error,
            json!({ "error": e.to_string() }),
            e.to_string(),
        ),
    };
    CheckRecord {
        name: spec.name.clone(),
        kind: spec.op.kind().to_string(),
        status,
        wall_ms,
        detail,
        summary,
        table: None,
    }
}

/// Runs the selected checks concurrently; records keep scenario order.
pub fn run(scenario: &Scenario, opts: &RunOptions, config: serde_json::Value) -> CliResult<Report> {
    if let Some(sec) = &opts.section {
        if !scenario.sections().contains(&sec.as_str()) {
            return Err(CliError::Config(format!(
                "unknown section `{sec}` (available: {})",
                scenario.sections().join(", ")
            )));
        }
    }
    let seconds = opts.seconds.or(scenario.budget.seconds);
    let terms = opts.terms.or(scenario.budget.terms);
    let full = opts.tier == Some(Tier::Full);
    let selected = |c: &CheckSpec| {
        opts.section.as_ref().is_none_or(|s| *s == c.section)
            && (full || c.tier == CheckTier::Default)
    };
    let checks = scenario
        .checks
        .par_iter()
        .map(|c| {
            if selected(c) {
                run_check(c, seconds, terms)
            } else {
                CheckRecord {
                    name: c.name.clone(),
                    kind: c.op.kind().to_string(),
                    status: Status::Skipped,
                    wall_ms: 0.0,
                    detail: serde_json::Value::Null,
                    summary: String::new(),
                    table: None,
                }
            }
        })
        .collect();
    let mut report = Report::new(&scenario.name, config);
    report.checks = checks;
    Ok(report)
}
