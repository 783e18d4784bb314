use proptest::prelude::*;

use super::*;
use crate::algebra::{rat, QSeries, Rational};
use crate::error::Error;
use crate::exterior::{exterior_derivative_of, QForm};

const N: usize = 6;

fn x(n: usize, i: usize) -> QSeries {
    QSeries::var(n, i, N)
}

#[test]
fn parses_the_counterexample() {
    let got = parse_form("d(x^4 + y^4) - 2*x^2*y^2 * dy").unwrap().to_form(N).unwrap();
    let (a, b) = (QSeries::var(2, 0, N + 1), QSeries::var(2, 1, N + 1));
    let p = &(&(&a * &a) * &(&a * &a)) + &(&(&b * &b) * &(&b * &b));
    let x2y2 = &(&x(2, 0) * &x(2, 0)) * &(&x(2, 1) * &x(2, 1));
    let expected = exterior_derivative_of(&p).try_sub(&QForm::dx(2, 1, N).mul_function(&x2y2.scale(&rat(2, 1))).unwrap()).unwrap();
    assert_eq!(got, expected);
    let in3 = parse_form_in("d(x^4 + y^4) - 2*x^2*y^2*dy", &Universe::standard(3)).unwrap();
    assert_eq!(in3.to_form(N).unwrap().nvars(), 3);
}

#[test]
fn parses_small_examples() {
    let got = parse_form("d(x*y)").unwrap().to_form(N).unwrap();
    assert_eq!(got, QForm::one_form(vec![x(2, 1), x(2, 0)]).unwrap());

    let rot = parse_form("x1*dx2 - x2*dx1").unwrap();
    assert_eq!(rot.universe, Universe(vec!["x1".into(), "x2".into()]));
    assert_eq!(rot.to_form(N).unwrap(), QForm::one_form(vec![-x(2, 1), x(2, 0)]).unwrap());

    let half = parse_form("1/2*x*dy − 3/4*dx").unwrap().to_form(N).unwrap();
    assert_eq!(half.component(0), QSeries::constant(2, N, rat(-3, 4)));
    assert_eq!(half.component(1), x(2, 0).scale(&rat(1, 2)));

    assert_eq!(parse_form("(1 + x)*d(x^2)").unwrap().to_form(N).unwrap().component(0), {
        let two_x = x(1, 0).scale(&rat(2, 1));
        &two_x + &(&two_x * &x(1, 0))
    });
}

#[test]
fn syntax_errors_carry_positions() {
    match parse_form("d(x*y") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 6)),
        other => panic!("{other:?}"),
    }
    match parse_form("x*dx +\n  y*dy + *") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 10)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_form("x^y"), Err(Error::Parse { .. })));
    assert!(matches!(parse_form("1/0*dx"), Err(Error::Parse { .. })));
}

#[test]
fn unknown_variables_are_rejected() {
    assert!(matches!(parse_form("q*dx"), Err(Error::UnknownVariable(_))));
    assert!(matches!(parse_form_in("x*dz", &Universe::standard(2)), Err(Error::UnknownVariable(_))));
    assert!(matches!(parse_form("x1*dx + y"), Err(Error::UnknownVariable(_))));
}

#[test]
fn functions_and_forms_do_not_mix() {
    assert!(parse_form("x + dx").unwrap().to_form(N).is_err());
    assert!(parse_form("dx*dy").unwrap().to_form(N).is_err());
    assert!(parse_form("x*y").unwrap().to_form(N).is_err());
    assert!(parse_form("x*dx").unwrap().to_series(N).is_err());
}

const CORPUS: &[&str] = &[
    "d(x^4 + y^4) - 2*x^2*y^2*dy",
    "d(x*y)",
    "2*y*dx + x*dy",
    "d(x^2 + y^2)",
    "x^4 + y^4",
    "x1*dx2 - x2*dx1",
    "x*dx + y*dy + x^3*dy",
    "(1 + x)*d(x^2 + y^2 + z^2)",
    "x - (y - z)",
    "-(x - y)^2*dz",
    "(-x)^2 + -x^2",
    "(x*y)^3*du",
    "2/3*d(x^3*t)",
    "x*(y*z)*dx",
];

#[test]
fn print_parse_round_trips_on_the_corpus() {
    for text in CORPUS {
        let e = parse_expr(text).unwrap();
        let printed = e.to_string();
        assert_eq!(parse_expr(&printed).unwrap(), e, "{text} printed as {printed}");
    }
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let names = prop::sample::select(vec!["x", "y", "z", "x1", "t"]);
    let leaf = prop_oneof![
        (0i64..20, 1i64..5).prop_map(|(p, q)| Expr::Num(rat(p, q))),
        names.clone().prop_map(|v| Expr::Var(v.to_string())),
        names.prop_map(|v| Expr::Covector(v.to_string())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), 0u32..4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
            inner.prop_map(|a| Expr::D(Box::new(a))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_expressions_reparse_identically(e in arb_expr()) {
        prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }
}

fn cheap() -> ScenarioSpec {
    gallery("parabolic-demo").unwrap()
}

fn failing() -> ScenarioSpec {
    let mut spec = ScenarioSpec::new("broken", ScenarioKind::FormCheck);
    spec.form = Some("d(x*y".into());
    spec
}

#[test]
fn json_round_trips() {
    for spec in [cheap(), failing(), gallery("saddle-holonomy").unwrap()] {
        let report = run_scenario(&spec);
        let bytes = emit_report(&report, Format::Json).unwrap();
        let back: ScenarioReport = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.schema, SCHEMA);
    }
}

#[test]
fn csv_has_one_row_per_check() {
    let reports = [run_scenario(&cheap()), run_scenario(&failing())];
    for r in &reports {
        let bytes = emit_report(r, Format::Csv).unwrap();
        let mut rd = csv::Reader::from_reader(bytes.as_slice());
        assert_eq!(rd.records().count(), r.checks.len());
    }
    let both = emit_reports(&reports, Format::Csv).unwrap();
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    assert_eq!(csv::Reader::from_reader(both.as_slice()).records().count(), total);
}

#[test]
fn text_lists_every_failure_and_blocker() {
    let report = run_scenario(&failing());
    assert!(report.failed());
    let text = String::from_utf8(emit_report(&report, Format::Text).unwrap()).unwrap();
    for c in &report.checks {
        assert!(text.contains(&format!("{} {}", format!("{:<12}", c.verdict.label()), c.id)), "{text}");
        if c.verdict == Verdict::Inconclusive {
            assert!(c.blocked_by.is_some());
        }
    }
    assert!(text.contains("fail"));
    assert_eq!(report.check("integrable").unwrap().blocked_by.as_deref(), Some("parse"));
}

#[test]
fn reports_are_deterministic() {
    for name in ["parabolic-demo", "oracle-agreement", "totally-real-fg"] {
        let spec = gallery(name).unwrap();
        let a = emit_report(&run_scenario(&spec), Format::Json).unwrap();
        let b = emit_report(&run_scenario(&spec), Format::Json).unwrap();
        assert_eq!(a, b, "{name}");
    }
    let timed = run_scenario_with(&cheap(), true);
    assert_eq!(timed.provenance.timings.as_ref().map(Vec::len), Some(timed.checks.len()));
}

#[test]
fn gallery_names_the_required_scenarios() {
    let list = gallery_list();
    let names: Vec<&str> = list.iter().map(|s| s.name.as_str()).collect();
    for want in [
        "saddle-holonomy",
        "counterexample-r2",
        "pham-invariance",
        "pham-family",
        "reeb-full-rank",
        "closedness-equivalence",
        "oracle-agreement",
        "totally-real-fg",
        "restriction-chain",
        "parabolic-demo",
        "exterior-identities",
        "linear-center",
    ] {
        assert!(names.contains(&want), "{want}");
    }
    let mut unique = names.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), names.len());
    assert!(list.iter().all(|s| s.validate().is_ok()));
}

#[test]
fn kinds_round_trip_through_labels() {
    for k in ScenarioKind::ALL {
        assert_eq!(k.label().parse::<ScenarioKind>().unwrap(), k);
    }
    assert!("nope".parse::<ScenarioKind>().is_err());
}

#[test]
fn inline_specs() {
    let spec = parse_inline("pham-invariance r=3 n=4 d=3 seed=7").unwrap();
    assert_eq!((spec.r, spec.n, spec.d, spec.seed, spec.order), (Some(3), Some(4), Some(3), 7, 10));
    assert!(parse_inline("pham-invariance r").is_err());
    assert!(parse_inline("nope").is_err());
    assert!(parse_inline("pham-invariance colour=red").is_err());
}

#[test]
fn invalid_specs_fail_without_panicking() {
    let spec = parse_inline("pham-invariance r=2").unwrap();
    let report = run_scenario(&spec);
    assert_eq!(report.checks.len(), 1);
    assert_eq!(report.checks[0].id, "validate");
    assert_eq!(report.checks[0].verdict, Verdict::Fail);
}

#[test]
fn requested_checks_filter_the_report() {
    let mut spec = cheap();
    spec.checks = vec!["identity-constant".into(), "bogus".into()];
    let report = run_scenario(&spec);
    let ids: Vec<&str> = report.checks.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids, ["identity-constant", "bogus"]);
    assert_eq!(report.check("bogus").unwrap().verdict, Verdict::Fail);
    assert_eq!((report.summary.pass, report.summary.fail), (1, 1));
}

#[test]
fn scenario_files() {
    let text = "\
# two scenarios
[scenario.pham-invariance]
r = 3
n = 3
d = 2   # Morse case

[scenario.mine]
kind = first-integral
form = d(x^2 + y^2 + x^3)
order = 5
";
    let specs = load_scenario_file(text).unwrap();
    assert_eq!(specs.len(), 2);
    assert_eq!((specs[0].kind, specs[0].n, specs[0].d), (ScenarioKind::PhamInvariance, Some(3), Some(2)));
    assert_eq!((specs[1].kind, specs[1].order), (ScenarioKind::FirstIntegral, 5));
    let report = run_scenario(&specs[1]);
    assert!(!report.failed(), "{report:?}");

    assert!(matches!(load_scenario_file("r = 3"), Err(Error::Parse { line: 1, .. })));
    assert!(matches!(load_scenario_file("[scenario.a]\nkind = focal\noops"), Err(Error::Parse { line: 3, .. })));
    assert!(load_scenario_file("[scenario.unknown]\nr = 3").is_err());
    assert!(load_scenario_file("[other]").is_err());
}

#[test]
fn single_form_tools() {
    let run = |kind: ScenarioKind, form: &str, extra: &[(&str, &str)]| {
        let mut spec = ScenarioSpec::new(kind.label(), kind);
        spec.form = Some(form.into());
        spec.order = 8;
        for (k, v) in extra {
            spec.set(k, v).unwrap();
        }
        run_scenario(&spec)
    };
    let r = run(ScenarioKind::FirstIntegral, "(1 + x)*d(x^2 + y^2 + z^2)", &[]);
    assert!(!r.failed());
    let r = run(ScenarioKind::FirstIntegral, "d(x^4 + y^4) - 2*x^2*y^2*dy", &[]);
    assert_eq!(r.check("first-integral").unwrap().value, Some(Measured::Integer(4)));
    let r = run(ScenarioKind::Focal, "d(x^2 + y^2) + x^3*dy", &[]);
    assert!(!r.failed(), "{r:?}");
    let r = run(ScenarioKind::Restrict, "d(x^2 + y^2 + z^2)", &[("coeffs", "1/2,-3")]);
    assert!(!r.failed());
    let r = run(ScenarioKind::Poincare, "x*dx + y*dy", &[("x0", "0.2")]);
    match &r.check("return-map").unwrap().value {
        Some(Measured::Number(d)) => assert!(d.abs() <= 1e-10),
        other => panic!("{other:?}"),
    }
    let r = run(ScenarioKind::Holonomy, "d(x*y)", &[]);
    assert!(!r.failed());
}

#[test]
fn rational_literals_are_exact() {
    let f = parse_form("1/3*x + 2/6*x").unwrap().to_series(N).unwrap();
    assert_eq!(f, x(1, 0).scale(&Rational::new(2.into(), 3.into())));
}
