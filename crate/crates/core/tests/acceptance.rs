//! Acceptance criteria 1–10, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use foliation::harness::{gallery, run_scenario, ScenarioReport, Tolerance, Verdict};

struct Criterion {
    number: u32,
    title: &'static str,
    scenario: &'static str,
    /// Checks that must pass; empty means every check in the report.
    checks: &'static [&'static str],
    limit: Option<Duration>,
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        number: 1,
        title: "holonomy multiplier of d(xy)",
        scenario: "saddle-holonomy",
        checks: &["holonomy-multiplier", "period-two"],
        limit: secs(5),
    },
    Criterion {
        number: 2,
        title: "counterexample obstructs, Lie oracle agrees",
        scenario: "counterexample-r2",
        checks: &["solver-obstructed", "lie-oracle"],
        limit: secs(10),
    },
    Criterion { number: 3, title: "Pham family", scenario: "pham-family", checks: &[], limit: secs(60) },
    Criterion { number: 4, title: "Reeb full rank", scenario: "reeb-full-rank", checks: &[], limit: None },
    Criterion {
        number: 5,
        title: "closedness equivalence probe",
        scenario: "closedness-equivalence",
        checks: &[],
        limit: None,
    },
    Criterion { number: 6, title: "focal oracle agreement", scenario: "oracle-agreement", checks: &[], limit: None },
    Criterion { number: 7, title: "totally real construction", scenario: "totally-real-fg", checks: &[], limit: None },
    Criterion { number: 8, title: "restriction chain", scenario: "restriction-chain", checks: &[], limit: None },
    Criterion { number: 9, title: "parabolic orbit demo", scenario: "parabolic-demo", checks: &[], limit: None },
    Criterion {
        number: 10,
        title: "exterior identities",
        scenario: "exterior-identities",
        checks: &[],
        limit: secs(120),
    },
];

fn summarize(report: &ScenarioReport, checks: &[&str]) -> (bool, Vec<String>) {
    let selected: Vec<_> = if checks.is_empty() {
        report.checks.iter().collect()
    } else {
        checks.iter().filter_map(|id| report.check(id)).collect()
    };
    let complete = checks.is_empty() || selected.len() == checks.len();
    let ok = complete && !selected.is_empty() && selected.iter().all(|c| c.verdict == Verdict::Pass);
    let notes = selected
        .iter()
        .filter(|c| c.verdict != Verdict::Pass || matches!(c.tolerance, Tolerance::Absolute(_)))
        .map(|c| {
            let value = c.value.as_ref().map(|v| format!(" = {v}")).unwrap_or_default();
            format!("{} {}{value} [{}]", c.id, c.verdict.label(), c.tolerance)
        })
        .collect();
    (ok, notes)
}

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let spec = gallery(c.scenario).expect("gallery entry");
        let start = Instant::now();
        let report = run_scenario(&spec);
        let elapsed = start.elapsed();
        let (checks_ok, notes) = summarize(&report, c.checks);
        let in_time = c.limit.is_none_or(|l| elapsed <= l);
        let ok = checks_ok && in_time;
        failed += usize::from(!ok);
        let limit = c.limit.map(|l| format!(" ≤ {} s", l.as_secs())).unwrap_or_default();
        let mut line = format!(
            "criterion {:>2} {}: {} ({} pass, {} fail, {} inconclusive; {:.2} s{limit})",
            c.number,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            report.summary.pass,
            report.summary.fail,
            report.summary.inconclusive,
            elapsed.as_secs_f64(),
        );
        if !notes.is_empty() {
            line.push_str(&format!(": {}", notes.join("; ")));
        }
        println!("{line}");
    }
    println!("acceptance: {} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
