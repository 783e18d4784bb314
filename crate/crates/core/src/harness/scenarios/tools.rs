//! Scenarios behind the single-form CLI subcommands.

use crate::algebra::{rat, Rational};
use crate::blowup::{blowup as blowup_chart, divisor_singularities, tangent_cone};
use crate::error::{Error, Result};
use crate::exterior::QForm;
use crate::first_integral::{
    complexify_restrict_commutes, dual_field, focal_values_from_obstructions, restrict_hyperplane, solve_gdf, solve_lie,
    FocalValueSequence,
};
use crate::harness::expr::{parse_form, parse_form_in, FormExpression, Universe};
use crate::harness::report::Measured;
use crate::harness::runner::{Outcome, Runner};
use crate::harness::spec::ScenarioSpec;
use crate::numerics::{holonomy_germ, poincare_return, HolonomyConfig, ReturnStatus, SeriesField};

/// Parses `spec.form`, in `n` standard variables when `n` is set.
fn parse(spec: &ScenarioSpec) -> Result<FormExpression> {
    let text = spec.form.as_deref().ok_or_else(|| Error::Scenario("no form given".into()))?;
    match spec.n {
        Some(n) => parse_form_in(text, &Universe::standard(n)),
        None => parse_form(text),
    }
}

/// Runs the `parse` check and returns the form with its variable names.
fn parse_check(spec: &ScenarioSpec, run: &mut Runner) -> Option<(QForm, Vec<String>)> {
    let mut out = None;
    run.check("parse", &[], || {
        let e = parse(spec)?;
        let w = e.to_form(spec.order)?;
        let text = w.fmt_with(&e.universe.0);
        out = Some((w, e.universe.0));
        Ok(Outcome::exact(true, "form parses to exact rational coefficients").text(text))
    });
    out
}

fn info(claim: impl Into<String>, text: impl Into<String>) -> Outcome {
    Outcome::exact(true, claim).text(text)
}

pub(super) fn form_check(spec: &ScenarioSpec, run: &mut Runner) {
    let parsed = parse_check(spec, run);
    let get = || parsed.as_ref().expect("set by parse");
    run.check("integrable", &["parse"], || {
        let (w, names) = get();
        let r = w.integrability_residual()?;
        let out = Outcome::exact(r.is_zero(), "ω∧dω = 0");
        Ok(if r.is_zero() { out } else { out.text(r.fmt_with(names)) })
    });
    run.check("leading-jet", &["parse"], || {
        let (w, names) = get();
        let dec = w.homogeneous_parts();
        let (Some(nu), Some(lead)) = (dec.leading, dec.leading_part()) else {
            return Ok(Outcome::exact(false, "ω has a nonzero jet").detail("zero form"));
        };
        Ok(info(format!("leading index ν = {nu}"), lead.fmt_with(names)).value(Measured::Integer(nu as i64)))
    });
    run.check("tangent-cone", &["leading-jet"], || {
        let (w, names) = get();
        let cone = tangent_cone(w)?;
        let text = if cone.dicritical {
            "dicritical".to_string()
        } else {
            format!("{} ({})", cone.polynomial.fmt_with(names), cone.irreducibility.as_ref().map_or("unknown", |i| i.label()))
        };
        Ok(info("P = ι_R ω_ν", text))
    });
}

pub(super) fn first_integral(spec: &ScenarioSpec, run: &mut Runner) {
    let parsed = parse_check(spec, run);
    run.check("first-integral", &["parse"], || {
        let (w, names) = parsed.as_ref().expect("set by parse");
        let cone = tangent_cone(w)?;
        if cone.dicritical {
            return Ok(Outcome::exact(false, "ω = g·df with a non-dicritical leading part").detail("dicritical"));
        }
        // Q = ι_R ω_ν / (ν + 1).
        let scale = rat(1, cone.leading as i64 + 1);
        let q = cone.polynomial.scale(&scale).with_order(spec.order + 1);
        let out = solve_gdf(w, &q, spec.order)?;
        let claim = format!("ω = g·df through N = {}", spec.order);
        Ok(match out.obstruction {
            None => Outcome::exact(out.residual_is_zero, claim)
                .text(format!("f = {}; g = {}", out.f.fmt_with(names), out.g.fmt_with(names))),
            Some(obs) => Outcome::exact(false, claim)
                .value(Measured::Integer(obs.degree as i64))
                .detail(format!("obstructed at stage degree {}: {}", obs.degree, obs.residual.fmt_with(names))),
        })
    });
}

fn focal_text(seq: &FocalValueSequence, count: usize) -> String {
    seq.values.iter().take(count).map(|v| format!("V{} = {}", v.index, v.value)).collect::<Vec<_>>().join(", ")
}

pub(super) fn focal(spec: &ScenarioSpec, run: &mut Runner) {
    let parsed = parse_check(spec, run);
    let count = spec.count.unwrap_or(4);
    let get = || &parsed.as_ref().expect("set by parse").0;
    let mut seqs = (None, None);
    run.check("obstruction-method", &["parse"], || {
        let seq = focal_values_from_obstructions(get(), spec.order)?;
        let text = focal_text(&seq, count);
        seqs.0 = Some(seq);
        Ok(info("focal values from solver obstructions", text))
    });
    run.check("lie-method", &["parse"], || {
        // The field whose center form is ω.
        let field = dual_field(&get().scale(&rat(-1, 2)))?;
        let seq = solve_lie(&field, spec.order)?;
        let text = focal_text(&seq, count);
        seqs.1 = Some(seq);
        Ok(info("focal values from the Lyapunov recursion", text))
    });
    run.check("agreement", &["obstruction-method", "lie-method"], || {
        let (a, b) = (seqs.0.as_ref().expect("set"), seqs.1.as_ref().expect("set"));
        let ia = a.first_nonzero().map(|v| v.index);
        let ib = b.first_nonzero().map(|v| v.index);
        let text = ia.map_or("all zero".to_string(), |i| format!("first nonzero V{i}"));
        Ok(Outcome::exact(ia == ib, "both methods agree on the first nonzero index").text(text))
    });
}

pub(super) fn blowup(spec: &ScenarioSpec, run: &mut Runner) {
    let parsed = parse_check(spec, run);
    let j = spec.chart.unwrap_or(0);
    let mut chart = None;
    run.check("blowup-chart", &["parse"], || {
        let (w, names) = parsed.as_ref().expect("set by parse");
        let c = blowup_chart(w, j)?;
        let text = format!("E^{} · ({})", c.divisor_power, c.strict_transform.fmt_with(names));
        let claim = if c.dicritical { "dicritical blow-up" } else { "non-dicritical blow-up" };
        chart = Some(c);
        Ok(info(format!("chart {j}: {claim}"), text))
    });
    run.check("divisor-singularities", &["blowup-chart"], || {
        let c = chart.as_ref().expect("set by blowup-chart");
        if c.strict_transform.nvars() != 2 || c.dicritical {
            return Ok(info("divisor singularities", "not applicable"));
        }
        let sing = divisor_singularities(c)?;
        let text = sing
            .iter()
            .map(|s| {
                let ratio = s.ratio.map_or("degenerate".to_string(), |r| format!("{:.6}{:+.6}i", r.re, r.im));
                format!("t = {:.6}{:+.6}i ratio {ratio}{}", s.t.re, s.t.im, if s.siegel { " siegel" } else { "" })
            })
            .collect::<Vec<_>>()
            .join("; ");
        Ok(info("divisor singularities", text).detail(format!("{} found", sing.len())))
    });
}

pub(super) fn holonomy(spec: &ScenarioSpec, run: &mut Runner) {
    let parsed = parse_check(spec, run);
    let mut chart = None;
    run.check("blowup-chart", &["parse"], || {
        let c = blowup_chart(&parsed.as_ref().expect("set by parse").0, spec.chart.unwrap_or(0))?;
        let ok = !c.dicritical;
        chart = Some(c);
        Ok(Outcome::exact(ok, "non-dicritical blow-up"))
    });
    run.check("holonomy", &["blowup-chart"], || {
        let cfg = HolonomyConfig { integrator: spec.integrator, ..HolonomyConfig::default() };
        let g = holonomy_germ(chart.as_ref().expect("set by blowup-chart"), &cfg)?;
        let a1 = g.multiplier();
        let text = format!(
            "a₁ = {:.12}{:+.12}i, |a₁| = {:.12}, period-two defect {:e}, fit residual {:e}",
            a1.re, a1.im, g.modulus, g.period_two_defect, g.fit_residual
        );
        Ok(Outcome::exact(g.dropped.is_empty(), "holonomy germ fitted from every fan seed").text(text))
    });
}

pub(super) fn poincare(spec: &ScenarioSpec, run: &mut Runner) {
    let parsed = parse_check(spec, run);
    run.check("return-map", &["parse"], || {
        let field = SeriesField::from_form(&parsed.as_ref().expect("set by parse").0)?;
        let x0 = spec.x0.unwrap_or(0.1);
        let s = poincare_return(&field, x0, &spec.integrator)?;
        let out = Outcome::exact(s.status == ReturnStatus::Returned, format!("orbit from x₀ = {x0} returns to the section"));
        Ok(match s.displacement {
            Some(d) => out.value(Measured::Number(d)),
            None => out.detail(format!("{:?}", s.status)),
        })
    });
}

pub(super) fn restrict(spec: &ScenarioSpec, run: &mut Runner) {
    let parsed = parse_check(spec, run);
    run.check("restriction", &["parse"], || {
        let (w, names) = parsed.as_ref().expect("set by parse");
        let coeffs = spec
            .coeffs
            .iter()
            .flatten()
            .map(|c| c.parse::<Rational>().map_err(|_| Error::Scenario(format!("bad coefficient `{c}`"))))
            .collect::<Result<Vec<_>>>()?;
        let r = restrict_hyperplane(w, &coeffs)?;
        let commutes = complexify_restrict_commutes(w, &coeffs)?;
        Ok(Outcome::exact(commutes, "restriction commutes with complexification").text(r.fmt_with(&names[..names.len() - 1])))
    });
}
