//! Expression parsing, the scenario gallery and report emission.

pub mod expr;
mod report;
mod runner;
mod scenarios;
mod spec;

pub use expr::{parse_expr, parse_form, parse_form_in, Expr, FormExpression, Universe};
pub use report::{
    emit_report, emit_reports, CheckResult, Format, Measured, Provenance, ScenarioReport, Summary, Timing, Tolerance,
    Verdict, SCHEMA,
};
pub use runner::{Outcome, Runner};
pub use scenarios::{gallery, gallery_list, load_scenario_file, parse_inline, run_scenario, run_scenario_with, seed_override, SEED_ENV};
pub use spec::{parse_scenario_file, ScenarioKind, ScenarioSpec};

#[cfg(test)]
mod tests;
