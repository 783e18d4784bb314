use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::spec::ScenarioSpec;
use crate::error::{Error, Result};
use crate::numerics::IntegratorConfig;

/// Version tag of the JSON report layout.
pub const SCHEMA: &str = "foliation-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tolerance {
    /// Symbolic claim checked in exact arithmetic.
    Exact,
    /// `|observed − expected| ≤ bound`, or `observed ≤ bound` for defects.
    Absolute(f64),
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::Exact => write!(f, "exact"),
            Tolerance::Absolute(b) => write!(f, "abs {b:e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measured {
    Number(f64),
    Integer(i64),
    Flag(bool),
    Text(String),
}

impl fmt::Display for Measured {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measured::Number(v) => write!(f, "{v:e}"),
            Measured::Integer(v) => write!(f, "{v}"),
            Measured::Flag(v) => write!(f, "{v}"),
            Measured::Text(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub verdict: Verdict,
    pub claim: String,
    pub tolerance: Tolerance,
    pub value: Option<Measured>,
    /// Upstream check that made this one inconclusive.
    pub blocked_by: Option<String>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub check: String,
    pub millis: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub order: usize,
    pub integrator: IntegratorConfig,
    /// Present only when timing was requested, so default reports stay
    /// byte-identical across runs.
    pub timings: Option<Vec<Timing>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema: String,
    pub scenario: ScenarioSpec,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    pub provenance: Provenance,
}

impl ScenarioReport {
    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::Scenario(format!("unknown format `{other}`"))),
        }
    }
}

pub fn emit_report(report: &ScenarioReport, format: Format) -> Result<Vec<u8>> {
    emit_reports(std::slice::from_ref(report), format)
}

/// Several reports in one document: a JSON array, one CSV table, or text
/// blocks separated by blank lines. A single report in JSON is emitted bare.
pub fn emit_reports(reports: &[ScenarioReport], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = if reports.len() == 1 {
                serde_json::to_vec_pretty(&reports[0])
            } else {
                serde_json::to_vec_pretty(reports)
            }
            .map_err(|e| Error::Scenario(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Scenario(e.to_string());
            w.write_record(["scenario", "check", "verdict", "value", "tolerance", "blocked_by", "claim", "detail"])
                .map_err(io)?;
            for r in reports {
                for c in &r.checks {
                    w.write_record([
                        r.scenario.name.as_str(),
                        &c.id,
                        c.verdict.label(),
                        &c.value.as_ref().map(ToString::to_string).unwrap_or_default(),
                        &c.tolerance.to_string(),
                        c.blocked_by.as_deref().unwrap_or(""),
                        &c.claim,
                        c.detail.as_deref().unwrap_or(""),
                    ])
                    .map_err(io)?;
                }
            }
            w.into_inner().map_err(|e| Error::Scenario(e.to_string()))
        }
        Format::Text => {
            let mut out = String::new();
            for (i, r) in reports.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&text(r));
            }
            Ok(out.into_bytes())
        }
    }
}

fn text(r: &ScenarioReport) -> String {
    let mut out = format!(
        "scenario {} ({} pass, {} fail, {} inconclusive)\n",
        r.scenario.name, r.summary.pass, r.summary.fail, r.summary.inconclusive
    );
    for c in &r.checks {
        out.push_str(&format!("  {:<12} {}: {} [{}]", c.verdict.label(), c.id, c.claim, c.tolerance));
        if let Some(v) = &c.value {
            out.push_str(&format!(" value={v}"));
        }
        if let Some(b) = &c.blocked_by {
            out.push_str(&format!(" blocked-by={b}"));
        }
        if let Some(d) = &c.detail {
            out.push_str(&format!(" ({d})"));
        }
        out.push('\n');
    }
    if let Some(t) = &r.provenance.timings {
        let total: f64 = t.iter().map(|t| t.millis).sum();
        out.push_str(&format!("  time {total:.1} ms\n"));
    }
    out
}
