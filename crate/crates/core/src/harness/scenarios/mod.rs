mod numeric;
mod symbolic;
mod tools;

use super::report::ScenarioReport;
use super::runner::Runner;
use super::spec::{parse_scenario_file, ScenarioKind, ScenarioSpec};
use crate::error::{Error, Result};

/// Environment variable that replaces the default seed of every gallery entry.
pub const SEED_ENV: &str = "FOLIATION_SEED";

pub fn seed_override() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Scenario(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn entry(name: &str, kind: ScenarioKind, order: usize, settings: &[(&str, &str)]) -> ScenarioSpec {
    let mut spec = ScenarioSpec::new(name, kind);
    spec.order = order;
    for (k, v) in settings {
        spec.set(k, v).expect("gallery settings are valid");
    }
    spec
}

/// The built-in scenarios with their default seeds. `FOLIATION_SEED`, when
/// set to a valid integer, replaces every seed.
pub fn gallery_list() -> Vec<ScenarioSpec> {
    use ScenarioKind::*;
    let mut list = vec![
        entry("saddle-holonomy", SaddleHolonomy, 8, &[]),
        entry("counterexample-r2", Counterexample, 12, &[]),
        entry("pham-invariance", PhamInvariance, 10, &[("r", "3"), ("n", "4"), ("d", "3")]),
        entry("pham-family", PhamFamily, 10, &[("cases", "5")]),
        entry("reeb-full-rank", ReebFullRank, 8, &[("n", "3"), ("cases", "5")]),
        entry("closedness-equivalence", ClosednessEquivalence, 12, &[("cases", "10"), ("count", "5")]),
        entry("oracle-agreement", OracleAgreement, 9, &[("cases", "20")]),
        entry("totally-real-fg", TotallyReal, 6, &[("cases", "10")]),
        entry("restriction-chain", RestrictionChain, 6, &[("n", "4"), ("r", "2"), ("cases", "100")]),
        entry("parabolic-demo", ParabolicDemo, 4, &[("coeffs", "1,1"), ("x0", "-0.1"), ("count", "200")]),
        entry("exterior-identities", ExteriorIdentities, 6, &[("cases", "500")]),
        entry("linear-center", LinearCenter, 12, &[]),
    ];
    if let Ok(Some(seed)) = seed_override() {
        for s in &mut list {
            s.seed = seed;
        }
    }
    list
}

pub fn gallery(name: &str) -> Result<ScenarioSpec> {
    gallery_list()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Scenario(format!("no gallery scenario named `{name}`")))
}

/// `"<gallery name> key=value …"`, e.g. `"pham-invariance r=3 n=4 d=3 seed=7"`.
pub fn parse_inline(text: &str) -> Result<ScenarioSpec> {
    let mut words = text.split_whitespace();
    let name = words.next().ok_or_else(|| Error::Scenario("empty scenario".into()))?;
    let mut spec = gallery(name)?;
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| Error::Scenario(format!("expected key=value, got `{w}`")))?;
        spec.set(k, v)?;
    }
    Ok(spec)
}

/// Specs from a scenario file. A section named after a gallery entry starts
/// from that entry; any other section must set `kind`.
pub fn load_scenario_file(text: &str) -> Result<Vec<ScenarioSpec>> {
    parse_scenario_file(text)?
        .into_iter()
        .map(|(name, settings)| {
            let kind = settings.iter().find(|(k, _)| k == "kind").map(|(_, v)| v.parse::<ScenarioKind>()).transpose()?;
            let mut spec = match kind {
                Some(kind) => ScenarioSpec::new(name, kind),
                None => gallery(&name)?,
            };
            for (k, v) in &settings {
                spec.set(k, v)?;
            }
            Ok(spec)
        })
        .collect()
}

pub fn run_scenario(spec: &ScenarioSpec) -> ScenarioReport {
    run_scenario_with(spec, false)
}

/// Runs every check of `spec`. Errors become failed checks, never a panic or
/// an early return.
pub fn run_scenario_with(spec: &ScenarioSpec, record_timings: bool) -> ScenarioReport {
    let mut run = Runner::new(spec, record_timings);
    if let Err(e) = spec.validate() {
        run.check("validate", &[], || Err(e));
        return run.finish();
    }
    use ScenarioKind::*;
    match spec.kind {
        SaddleHolonomy => numeric::saddle_holonomy(spec, &mut run),
        Counterexample => symbolic::counterexample(spec, &mut run),
        PhamInvariance => symbolic::pham_invariance(spec, &mut run),
        PhamFamily => symbolic::pham_family(spec, &mut run),
        ReebFullRank => symbolic::reeb_full_rank(spec, &mut run),
        ClosednessEquivalence => numeric::closedness_equivalence(spec, &mut run),
        OracleAgreement => symbolic::oracle_agreement(spec, &mut run),
        TotallyReal => numeric::totally_real(spec, &mut run),
        RestrictionChain => symbolic::restriction_chain(spec, &mut run),
        ParabolicDemo => numeric::parabolic_demo(spec, &mut run),
        ExteriorIdentities => symbolic::exterior_identities(spec, &mut run),
        LinearCenter => numeric::linear_center(spec, &mut run),
        FormCheck => tools::form_check(spec, &mut run),
        FirstIntegral => tools::first_integral(spec, &mut run),
        Focal => tools::focal(spec, &mut run),
        Blowup => tools::blowup(spec, &mut run),
        Holonomy => tools::holonomy(spec, &mut run),
        Poincare => tools::poincare(spec, &mut run),
        Restrict => tools::restrict(spec, &mut run),
    }
    run.finish()
}

/// Seed of case `i`.
fn case_seed(spec: &ScenarioSpec, i: usize) -> u64 {
    spec.seed.wrapping_add(i as u64)
}
