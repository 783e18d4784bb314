use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::check_order;
use crate::error::{Error, Result};
use crate::numerics::IntegratorConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    SaddleHolonomy,
    Counterexample,
    PhamInvariance,
    PhamFamily,
    ReebFullRank,
    ClosednessEquivalence,
    OracleAgreement,
    TotallyReal,
    RestrictionChain,
    ParabolicDemo,
    ExteriorIdentities,
    LinearCenter,
    FormCheck,
    FirstIntegral,
    Focal,
    Blowup,
    Holonomy,
    Poincare,
    Restrict,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 19] = [
        ScenarioKind::SaddleHolonomy,
        ScenarioKind::Counterexample,
        ScenarioKind::PhamInvariance,
        ScenarioKind::PhamFamily,
        ScenarioKind::ReebFullRank,
        ScenarioKind::ClosednessEquivalence,
        ScenarioKind::OracleAgreement,
        ScenarioKind::TotallyReal,
        ScenarioKind::RestrictionChain,
        ScenarioKind::ParabolicDemo,
        ScenarioKind::ExteriorIdentities,
        ScenarioKind::LinearCenter,
        ScenarioKind::FormCheck,
        ScenarioKind::FirstIntegral,
        ScenarioKind::Focal,
        ScenarioKind::Blowup,
        ScenarioKind::Holonomy,
        ScenarioKind::Poincare,
        ScenarioKind::Restrict,
    ];

    pub fn label(self) -> String {
        serde_json::to_value(self).ok().and_then(|v| v.as_str().map(String::from)).expect("unit variant")
    }

    /// Kinds that act on a user-supplied form.
    pub fn needs_form(self) -> bool {
        matches!(
            self,
            ScenarioKind::FormCheck
                | ScenarioKind::FirstIntegral
                | ScenarioKind::Focal
                | ScenarioKind::Blowup
                | ScenarioKind::Holonomy
                | ScenarioKind::Poincare
                | ScenarioKind::Restrict
        )
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::Scenario(format!("unknown scenario kind `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    pub kind: ScenarioKind,
    pub seed: u64,
    /// Truncation order `N`.
    pub order: usize,
    pub r: Option<usize>,
    pub n: Option<usize>,
    pub d: Option<u32>,
    /// Number of randomized cases.
    pub cases: Option<usize>,
    pub form: Option<String>,
    pub count: Option<usize>,
    pub chart: Option<usize>,
    pub x0: Option<f64>,
    /// Hyperplane coefficients as exact rationals `p/q`.
    pub coeffs: Option<Vec<String>>,
    pub integrator: IntegratorConfig,
    /// Checks to report; empty means all.
    pub checks: Vec<String>,
}

impl ScenarioSpec {
    pub fn new(name: impl Into<String>, kind: ScenarioKind) -> Self {
        Self {
            name: name.into(),
            kind,
            seed: 7,
            order: 10,
            r: None,
            n: None,
            d: None,
            cases: None,
            form: None,
            count: None,
            chart: None,
            x0: None,
            coeffs: None,
            integrator: IntegratorConfig::default(),
            checks: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_order(self.order)?;
        self.integrator.validate()?;
        if self.kind.needs_form() && self.form.is_none() {
            return Err(Error::Scenario(format!("scenario `{}` needs a form", self.name)));
        }
        if self.kind == ScenarioKind::PhamInvariance {
            let (r, n, d) = (self.r.unwrap_or(0), self.n.unwrap_or(0), self.d.unwrap_or(0));
            if !(3 <= r && r <= n && d >= 2) {
                return Err(Error::Scenario(format!("pham-invariance needs 3 ≤ r ≤ n and d ≥ 2, got r={r} n={n} d={d}")));
            }
        }
        if self.kind == ScenarioKind::Restrict && self.coeffs.is_none() {
            return Err(Error::Scenario("restrict needs hyperplane coefficients".into()));
        }
        Ok(())
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Scenario(format!("bad value `{v}` for `{key}`")))
        }
        let list = |v: &str| v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect::<Vec<_>>();
        match key {
            "kind" => self.kind = value.parse()?,
            "seed" => self.seed = num(key, value)?,
            "order" | "N" => self.order = num(key, value)?,
            "r" => self.r = Some(num(key, value)?),
            "n" => self.n = Some(num(key, value)?),
            "d" => self.d = Some(num(key, value)?),
            "cases" => self.cases = Some(num(key, value)?),
            "form" => self.form = Some(value.to_string()),
            "count" => self.count = Some(num(key, value)?),
            "chart" => self.chart = Some(num(key, value)?),
            "x0" => self.x0 = Some(num(key, value)?),
            "coeffs" => self.coeffs = Some(list(value)),
            "checks" => self.checks = list(value),
            "rtol" | "tol-rel" => self.integrator.rtol = num(key, value)?,
            "atol" | "tol-abs" => self.integrator.atol = num(key, value)?,
            "max_step" => self.integrator.max_step = num(key, value)?,
            "max_steps" => self.integrator.max_steps = num(key, value)?,
            "event_tol" => self.integrator.event_tol = num(key, value)?,
            "max_radius" => self.integrator.max_radius = num(key, value)?,
            other => return Err(Error::Scenario(format!("unknown key `{other}`"))),
        }
        Ok(())
    }
}

/// Sections of a scenario file: `[scenario.<name>]` headers followed by
/// `key = value` lines. `#` starts a comment.
pub fn parse_scenario_file(text: &str) -> Result<Vec<(String, Vec<(String, String)>)>> {
    let mut out: Vec<(String, Vec<(String, String)>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| Error::Parse { line: i + 1, column: 1, message: m.into() };
        if let Some(rest) = line.strip_prefix('[') {
            let inner = rest.strip_suffix(']').ok_or_else(|| err("unterminated section header"))?;
            let name = inner.trim().strip_prefix("scenario.").ok_or_else(|| err("sections must be [scenario.<name>]"))?;
            if name.is_empty() {
                return Err(err("empty scenario name"));
            }
            out.push((name.to_string(), Vec::new()));
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| err("expected `key = value`"))?;
        let section = out.last_mut().ok_or_else(|| err("setting outside a [scenario.<name>] section"))?;
        section.1.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
