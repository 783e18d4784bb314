use std::time::Instant;

use super::report::{CheckResult, Measured, Provenance, ScenarioReport, Summary, Timing, Tolerance, Verdict, SCHEMA};
use super::spec::ScenarioSpec;
use crate::error::Result;

/// What a check observed.
pub struct Outcome {
    pub passed: bool,
    pub claim: String,
    pub tolerance: Tolerance,
    pub value: Option<Measured>,
    pub detail: Option<String>,
}

impl Outcome {
    pub fn exact(passed: bool, claim: impl Into<String>) -> Self {
        Self { passed, claim: claim.into(), tolerance: Tolerance::Exact, value: None, detail: None }
    }

    /// `observed ≤ bound`.
    pub fn within(observed: f64, bound: f64, claim: impl Into<String>) -> Self {
        Self {
            passed: observed <= bound,
            claim: claim.into(),
            tolerance: Tolerance::Absolute(bound),
            value: Some(Measured::Number(observed)),
            detail: None,
        }
    }

    pub fn value(mut self, v: Measured) -> Self {
        self.value = Some(v);
        self
    }

    pub fn text(self, v: impl Into<String>) -> Self {
        self.value(Measured::Text(v.into()))
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

/// Runs checks in declared order. A check whose dependency did not pass is
/// reported inconclusive and names that dependency.
pub struct Runner {
    spec: ScenarioSpec,
    checks: Vec<CheckResult>,
    timings: Option<Vec<Timing>>,
}

impl Runner {
    pub fn new(spec: &ScenarioSpec, record_timings: bool) -> Self {
        Self { spec: spec.clone(), checks: Vec::new(), timings: record_timings.then(Vec::new) }
    }

    pub fn passed(&self, id: &str) -> bool {
        self.checks.iter().any(|c| c.id == id && c.verdict == Verdict::Pass)
    }

    pub fn check(&mut self, id: impl Into<String>, deps: &[&str], f: impl FnOnce() -> Result<Outcome>) -> bool {
        let id = id.into();
        if let Some(block) = deps.iter().find(|d| !self.passed(d)) {
            self.checks.push(CheckResult {
                id,
                verdict: Verdict::Inconclusive,
                claim: "not evaluated".into(),
                tolerance: Tolerance::Exact,
                value: None,
                blocked_by: Some(block.to_string()),
                detail: None,
            });
            return false;
        }
        let start = Instant::now();
        let result = match f() {
            Ok(o) => CheckResult {
                id: id.clone(),
                verdict: if o.passed { Verdict::Pass } else { Verdict::Fail },
                claim: o.claim,
                tolerance: o.tolerance,
                value: o.value,
                blocked_by: None,
                detail: o.detail,
            },
            Err(e) => CheckResult {
                id: id.clone(),
                verdict: Verdict::Fail,
                claim: "evaluation error".into(),
                tolerance: Tolerance::Exact,
                value: None,
                blocked_by: None,
                detail: Some(e.to_string()),
            },
        };
        if let Some(t) = &mut self.timings {
            t.push(Timing { check: id, millis: start.elapsed().as_secs_f64() * 1e3 });
        }
        let ok = result.verdict == Verdict::Pass;
        self.checks.push(result);
        ok
    }

    pub fn finish(self) -> ScenarioReport {
        let mut checks = self.checks;
        if !self.spec.checks.is_empty() {
            let wanted = &self.spec.checks;
            let mut kept: Vec<CheckResult> = checks.iter().filter(|c| wanted.contains(&c.id)).cloned().collect();
            for w in wanted {
                if !checks.iter().any(|c| &c.id == w) {
                    kept.push(CheckResult {
                        id: w.clone(),
                        verdict: Verdict::Fail,
                        claim: "requested check".into(),
                        tolerance: Tolerance::Exact,
                        value: None,
                        blocked_by: None,
                        detail: Some("no such check in this scenario".into()),
                    });
                }
            }
            checks = kept;
        }
        let count = |v: Verdict| checks.iter().filter(|c| c.verdict == v).count();
        let summary = Summary { pass: count(Verdict::Pass), fail: count(Verdict::Fail), inconclusive: count(Verdict::Inconclusive) };
        let provenance = Provenance {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: self.spec.seed,
            order: self.spec.order,
            integrator: self.spec.integrator,
            timings: self.timings,
        };
        ScenarioReport { schema: SCHEMA.into(), scenario: self.spec, checks, summary, provenance }
    }
}
