use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;

use super::case_seed;
use crate::algebra::{pham, rat, Composition, QSeries, Rational};
use crate::blowup::{prime_power, tangent_cone, Irreducibility};
use crate::error::Result;
use crate::exterior::{exterior_derivative_of, QForm};
use crate::first_integral::{
    align_gauge, center_form, complexify_restrict_commutes, dual_field, focal_values_from_obstructions, lie_obstructions,
    morse_normalize, restrict_hyperplane, solve_gdf, solve_lie, Status,
};
use crate::harness::expr::{parse_form_in, Universe};
use crate::harness::report::Measured;
use crate::harness::runner::{Outcome, Runner};
use crate::harness::spec::ScenarioSpec;
use crate::random::{random_rational, rng, small_coeff, sparse_one_form, sparse_series, SeededRng};

pub const COUNTEREXAMPLE: &str = "d(x^4 + y^4) - 2*x^2*y^2*dy";

/// Stage degree at which the counterexample first obstructs, fixed by a
/// brute-force run of the solver at `N = 12`.
pub const COUNTEREXAMPLE_DEGREE: usize = 4;

fn sum_of_squares(n: usize, k: usize, order: usize) -> QSeries {
    (0..k).fold(QSeries::zero(n, order), |acc, i| {
        let x = QSeries::var(n, i, order);
        &acc + &(&x * &x)
    })
}

/// `ω − g·df` through order `N`, recomputed from scratch.
fn gdf_residual(omega: &QForm, f: &QSeries, g: &QSeries) -> Result<QForm> {
    let order = omega.order();
    let gdf = exterior_derivative_of(&f.with_order(order + 1)).mul_function(&g.with_order(order))?;
    omega.try_sub(&gdf)
}

pub(super) fn counterexample(spec: &ScenarioSpec, run: &mut Runner) {
    let order = spec.order;
    let space = Universe::standard(3);
    let mut forms = None;
    run.check("parse", &[], || {
        let w = parse_form_in(COUNTEREXAMPLE, &space)?.to_form(order)?;
        let lead = parse_form_in("x^4 + y^4", &space)?.to_series(order + 1)?;
        forms = Some((w, lead));
        Ok(Outcome::exact(true, format!("`{COUNTEREXAMPLE}` in (x, y, z)")))
    });
    let get = || forms.as_ref().expect("set by parse");
    run.check("integrable", &["parse"], || {
        let (w, _) = get();
        Ok(Outcome::exact(w.integrability_residual()?.is_zero(), "ω∧dω = 0"))
    });
    run.check("leading-jet", &["parse"], || {
        let (w, lead) = get();
        let ok = w.valuation() == Some(3) && w.homogeneous_part(3) == exterior_derivative_of(lead).homogeneous_part(3);
        Ok(Outcome::exact(ok, "leading part is d(x⁴ + y⁴) with ν = 3"))
    });
    let mut degree = None;
    run.check("solver-obstructed", &["integrable"], || {
        let (w, lead) = get();
        let out = solve_gdf(w, lead, order)?;
        let Some(obs) = out.obstruction.filter(|_| out.status == Status::Obstructed) else {
            return Ok(Outcome::exact(false, "solve_gdf obstructs at a finite degree").detail("solved"));
        };
        degree = Some(obs.degree);
        let ok = obs.degree <= order && obs.degree == COUNTEREXAMPLE_DEGREE;
        Ok(Outcome::exact(ok, format!("obstructed at stage degree {COUNTEREXAMPLE_DEGREE} ≤ N"))
            .value(Measured::Integer(obs.degree as i64))
            .detail(format!("residual {}", obs.residual.fmt_with(&space.0))))
    });
    run.check("lie-oracle", &["solver-obstructed"], || {
        let planar = Universe::standard(2);
        let w = parse_form_in(COUNTEREXAMPLE, &planar)?.to_form(order)?;
        let lead = parse_form_in("x^4 + y^4", &planar)?.to_series(order + 1)?;
        let stages = lie_obstructions(&dual_field(&w)?, &lead, order)?;
        let first = stages.iter().find(|s| !s.value().is_zero());
        let expected = degree.expect("set by solver-obstructed") + 1;
        let index = first.map(|s| s.index);
        let out = Outcome::exact(index == Some(expected), format!("first nonzero Lie stage at index {expected}"));
        Ok(match index {
            Some(i) => out.value(Measured::Integer(i as i64)),
            None => out.detail("no nonzero stage"),
        })
    });
}

/// `ω = dP + P·dh` with `h` sparse of degree 1..4, so `ω̃ = P·dh`.
fn pham_form(r: usize, n: usize, d: u32, seed: u64, order: usize) -> Result<(QForm, QSeries)> {
    let p: QSeries = pham(r, n, d, order + 1);
    let h = sparse_series(&mut rng(seed), n, order + 1, 1, 4, 4);
    let w = exterior_derivative_of(&p).try_add(&exterior_derivative_of(&h).mul_function(&p.truncated(order))?)?;
    Ok((w, p))
}

/// Trial division: `Some((p, s))` when `d = p^s`.
fn prime_power_oracle(d: u64) -> Option<(u64, u32)> {
    let p = (2..=d).find(|k| d.is_multiple_of(*k))?;
    let (mut rest, mut s) = (d, 0);
    while rest % p == 0 {
        rest /= p;
        s += 1;
    }
    (rest == 1).then_some((p, s))
}

fn all_cases(cases: &[(QForm, QSeries)], mut f: impl FnMut(&QForm, &QSeries) -> Result<bool>) -> Result<usize> {
    let mut bad = 0;
    for (w, p) in cases {
        if !f(w, p)? {
            bad += 1;
        }
    }
    Ok(bad)
}

fn count_outcome(bad: usize, total: usize, claim: String) -> Outcome {
    Outcome::exact(bad == 0, claim).value(Measured::Integer((total - bad) as i64)).detail(format!("{} of {total} cases", total - bad))
}

fn pham_checks(run: &mut Runner, prefix: &str, (r, n, d): (usize, usize, u32), seeds: &[u64], order: usize) {
    let id = |s: &str| format!("{prefix}{s}");
    let mut cases = Vec::new();
    run.check(id("build"), &[], || {
        for &s in seeds {
            cases.push(pham_form(r, n, d, s, order)?);
        }
        Ok(Outcome::exact(true, format!("ω = dP + P·dh for P = P_{{{r},{n},{d}}}")).value(Measured::Integer(seeds.len() as i64)))
    });
    let total = seeds.len();
    let build = id("build");
    let deps = [build.as_str()];
    run.check(id("darboux-residual"), &deps, || {
        let bad = all_cases(&cases, |w, p| Ok(w.wedge(&exterior_derivative_of(&p.with_order(order + 1)))?.divisibility_residual(p)?.is_zero()))?;
        Ok(count_outcome(bad, total, "ω∧dP is divisible by P".into()))
    });
    run.check(id("integrable"), &deps, || {
        let bad = all_cases(&cases, |w, _| Ok(w.integrability_residual()?.is_zero()))?;
        Ok(count_outcome(bad, total, "ω∧dω = 0".into()))
    });
    let mut cones = Vec::new();
    run.check(id("tangent-cone"), &deps, || {
        let scale = Rational::from_integer(d.into());
        let bad = all_cases(&cases, |w, p| {
            let cone = tangent_cone(w)?;
            let ok = cone.degree == Some(d as usize) && cone.polynomial.bucket(d as usize) == p.scale(&scale).bucket(d as usize);
            cones.push(cone);
            Ok(ok)
        })?;
        Ok(count_outcome(bad, total, format!("ι_R ω_ν = {d}·P")))
    });
    let cone = id("tangent-cone");
    run.check(id("non-dicritical"), &[cone.as_str()], || {
        let bad = cones.iter().filter(|c| c.dicritical).count();
        Ok(count_outcome(bad, total, "tangent cone polynomial is nonzero".into()))
    });
    run.check(id("irreducible"), &[cone.as_str()], || {
        let bad = cones.iter().filter(|c| c.irreducibility != Some(Irreducibility::Irreducible)).count();
        Ok(count_outcome(bad, total, "tangent cone is irreducible".into()))
    });
    run.check(id("prime-power"), &[], || {
        let got = prime_power(d as u64);
        let want = prime_power_oracle(d as u64);
        let text = match got {
            Some((p, s)) => format!("{d} = {p}^{s}"),
            None => format!("{d} is not a prime power"),
        };
        Ok(Outcome::exact(got == want, "prime-power decomposition of d agrees with trial division").text(text))
    });
    run.check(id("first-integral"), &[id("integrable").as_str()], || {
        let bad = all_cases(&cases, |w, p| {
            let out = solve_gdf(w, p, order)?;
            Ok(out.is_solved() && out.residual_is_zero && gdf_residual(w, &out.f, &out.g)?.is_zero())
        })?;
        Ok(count_outcome(bad, total, format!("ω = g·df solved through N = {order} with zero residual")))
    });
}

pub(super) fn pham_invariance(spec: &ScenarioSpec, run: &mut Runner) {
    let triple = (spec.r.unwrap_or(3), spec.n.unwrap_or(4), spec.d.unwrap_or(3));
    pham_checks(run, "", triple, &[spec.seed], spec.order);
}

pub const PHAM_TRIPLES: [(usize, usize, u32); 4] = [(3, 3, 2), (3, 4, 3), (3, 4, 4), (4, 5, 2)];

pub(super) fn pham_family(spec: &ScenarioSpec, run: &mut Runner) {
    let seeds: Vec<u64> = (0..spec.cases.unwrap_or(5)).map(|i| case_seed(spec, i)).collect();
    for (r, n, d) in PHAM_TRIPLES {
        pham_checks(run, &format!("P{r}{n}{d}/"), (r, n, d), &seeds, spec.order);
    }
}

pub(super) fn reeb_full_rank(spec: &ScenarioSpec, run: &mut Runner) {
    let (n, order) = (spec.n.unwrap_or(3), spec.order);
    let total = spec.cases.unwrap_or(5);
    let q = sum_of_squares(n, n, order + 1);
    let mut cases = Vec::new();
    run.check("morse-normalize", &[], || {
        let mut bad = 0;
        for i in 0..total {
            let mut r = rng(case_seed(spec, i));
            let f = &q + &sparse_series(&mut r, n, order + 1, 3, 4, 4);
            let u = sparse_series(&mut r, n, order, 1, 2, 3);
            let w = exterior_derivative_of(&f).mul_function(&(&QSeries::one(n, order) + &u))?;
            let phi = morse_normalize(&f, order + 1)?;
            if !(phi.apply(&f)?.agrees_through(&q, order + 1) && phi.is_inverse_pair()?) {
                bad += 1;
            }
            cases.push((w, phi));
        }
        Ok(count_outcome(bad, total, format!("f∘h = Q exactly through degree {}", order + 1)))
    });
    run.check("pullback-gdq", &["morse-normalize"], || {
        let mut bad = 0;
        for (w, phi) in &cases {
            let pulled = w.pullback(&phi.images, Composition::Strict)?.truncated(order);
            let out = solve_gdf(&pulled, &q, order)?;
            if !out.is_solved() {
                bad += 1;
                continue;
            }
            // The solver may return φ(Q) for some φ(t) = t + …; bring it back to Q.
            let (f, g) = align_gauge(&out.f, &out.g, &q)?;
            if !(f == q.truncated(f.order()) && gdf_residual(&pulled, &q, &g)?.is_zero()) {
                bad += 1;
            }
        }
        Ok(count_outcome(bad, total, format!("h*(ω) = g·dQ with zero residual through N = {order}")))
    });
}

/// `Ham(H) + c·r^{2j}·(x∂x + y∂y)` with `H = r²/2 + sparse cubic..quintic`.
pub fn seeded_focus(r: &mut SeededRng, j: usize, order: usize) -> [QSeries; 2] {
    let (x, y) = (QSeries::var(2, 0, order + 1), QSeries::var(2, 1, order + 1));
    let r2 = &(&x * &x) + &(&y * &y);
    let h = &r2.scale(&rat(1, 2)) + &sparse_series(r, 2, order + 1, 3, 5, 4);
    let c = small_coeff(r);
    let rj = (0..j).fold(QSeries::one(2, order + 1), |acc, _| &acc * &r2).scale(&c);
    [
        (&-h.partial(1).expect("planar") + &(&rj * &x).truncated(order)).truncated(order),
        (&h.partial(0).expect("planar") + &(&rj * &y).truncated(order)).truncated(order),
    ]
}

pub(super) fn oracle_agreement(spec: &ScenarioSpec, run: &mut Runner) {
    let (order, total) = (spec.order, spec.cases.unwrap_or(20));
    let mut rows = Vec::new();
    run.check("first-index", &[], || {
        let mut bad = 0;
        for i in 0..total {
            let j = 1 + i % 3;
            let field = seeded_focus(&mut rng(case_seed(spec, i)), j, order);
            let lie = solve_lie(&field, order)?;
            let obs = focal_values_from_obstructions(&center_form(&field)?, order)?;
            match (lie.first_nonzero(), obs.first_nonzero()) {
                (Some(a), Some(b)) if a.index == b.index => rows.push((j, a.index, b.value.clone() / a.value.clone())),
                _ => bad += 1,
            }
        }
        Ok(count_outcome(bad, total, "solve_lie and the obstruction method first differ from zero at the same index".into()))
    });
    run.check("index-matches-construction", &["first-index"], || {
        let bad = rows.iter().filter(|(j, index, _)| *index != 2 * j + 2).count();
        Ok(count_outcome(bad, total, "first nonzero index is 2j + 2 for a radial term of degree 2j + 1".into()))
    });
    run.check("constant-ratio", &["first-index"], || {
        let mut ratios: BTreeMap<usize, Rational> = BTreeMap::new();
        let mut ok = true;
        for (_, index, ratio) in &rows {
            ok &= ratios.entry(*index).or_insert_with(|| ratio.clone()) == ratio;
        }
        let text = ratios.iter().map(|(k, v)| format!("V{k}: {v}")).collect::<Vec<_>>().join(", ");
        Ok(Outcome::exact(ok, "obstruction/Lyapunov ratio is one rational per index").text(text))
    });
}

pub(super) fn restriction_chain(spec: &ScenarioSpec, run: &mut Runner) {
    let (order, total) = (spec.order, spec.cases.unwrap_or(100));
    let (n, k) = (spec.n.unwrap_or(4), spec.r.unwrap_or(2));
    let mut r = rng(spec.seed);
    run.check("commutation", &[], || {
        let mut bad = 0;
        for _ in 0..total {
            let m = r.gen_range(2..=4);
            let w = sparse_one_form(&mut r, m, order, 0, 3, 2);
            let coeffs: Vec<Rational> = (0..m - 1).map(|_| random_rational(&mut r, 3, 4)).collect();
            if !complexify_restrict_commutes(&w, &coeffs)? {
                bad += 1;
            }
        }
        Ok(count_outcome(bad, total, "complexify∘restrict = restrict∘complexify".into()))
    });
    run.check("leading-jet", &[], || {
        // d(x₁² + … + x_k²) + P·dh + ω̃ with ω̃ of coefficient degree 2..3.
        let p = sum_of_squares(n, k, order + 1);
        let h = sparse_series(&mut r, n, order + 1, 1, 3, 3);
        let tilde = sparse_one_form(&mut r, n, order, 2, 3, 2);
        let w = exterior_derivative_of(&p)
            .try_add(&exterior_derivative_of(&h).mul_function(&p.truncated(order))?)?
            .try_add(&tilde)?;
        let target = exterior_derivative_of(&sum_of_squares(k, k, order + 1));
        let mut degenerate = Vec::new();
        for draw in 0..total {
            let mut cur = w.clone();
            while cur.nvars() > k {
                let coeffs: Vec<Rational> = (0..cur.nvars() - 1).map(|_| random_rational(&mut r, 3, 4)).collect();
                cur = restrict_hyperplane(&cur, &coeffs)?;
            }
            if cur.valuation() != Some(1) || cur.homogeneous_part(1) != target.homogeneous_part(1) {
                degenerate.push(draw);
            }
        }
        let kept = total - degenerate.len();
        let detail = if degenerate.is_empty() {
            "no degenerate draws".to_string()
        } else {
            format!("degenerate draws {degenerate:?}")
        };
        Ok(Outcome::exact(kept * 100 >= 95 * total, format!("leading jet d(x₁²+…+x_{k}²) survives ≥ 95% of hyperplane chains {n}→{k}"))
            .value(Measured::Integer(kept as i64))
            .detail(detail))
    });
}

pub(super) fn exterior_identities(spec: &ScenarioSpec, run: &mut Runner) {
    let (order, total) = (spec.order, spec.cases.unwrap_or(500));
    let draw = |i: usize| {
        let mut r = rng(case_seed(spec, i));
        let n = r.gen_range(2..=4);
        let f = sparse_series(&mut r, n, order, 0, 4, 5);
        let a = sparse_one_form(&mut r, n, order, 0, 3, 2);
        let b = sparse_one_form(&mut r, n, order, 0, 3, 2);
        let k = r.gen_range(2..=5);
        let p = sparse_series(&mut r, n, order, k, k, 4);
        (f, a, b, k, p)
    };
    let claim = |c: &str| format!("{c} on {total} seeded cases");
    run.check("d-squared", &[], || {
        let mut bad = 0;
        for i in 0..total {
            let (f, a, ..) = draw(i);
            let ok = exterior_derivative_of(&f).d()?.is_zero() && a.d()?.d()?.is_zero();
            bad += usize::from(!ok);
        }
        Ok(count_outcome(bad, total, claim("d∘d = 0")))
    });
    run.check("graded-antisymmetry", &[], || {
        let mut bad = 0;
        for i in 0..total {
            let (_, a, b, ..) = draw(i);
            let db = b.d()?;
            let a1 = a.truncated(db.order());
            // deg 1 ∧ deg 1 flips sign; deg 1 ∧ deg 2 does not.
            let ok = a.wedge(&b)? == b.wedge(&a)?.neg() && a1.wedge(&db)? == db.wedge(&a1)?;
            bad += usize::from(!ok);
        }
        Ok(count_outcome(bad, total, claim("α∧β = (−1)^{kl} β∧α")))
    });
    run.check("leibniz", &[], || {
        let mut bad = 0;
        for i in 0..total {
            let (f, a, b, ..) = draw(i);
            // d(fα) = df∧α + f·dα
            let lhs = a.mul_function(&f)?.d()?;
            let low = lhs.order();
            let rhs = exterior_derivative_of(&f)
                .truncated(low)
                .wedge(&a.truncated(low))?
                .try_add(&a.d()?.mul_function(&f.truncated(low))?)?;
            // d(α∧β) = dα∧β − α∧dβ
            let lhs2 = a.wedge(&b)?.d()?;
            let low2 = lhs2.order();
            let rhs2 = a.d()?.wedge(&b.truncated(low2))?.try_sub(&a.truncated(low2).wedge(&b.d()?)?)?;
            bad += usize::from(lhs != rhs || lhs2 != rhs2);
        }
        Ok(count_outcome(bad, total, claim("Leibniz rule")))
    });
    run.check("euler-identity", &[], || {
        let mut bad = 0;
        for i in 0..total {
            let (.., k, p) = draw(i);
            let got = exterior_derivative_of(&p).euler_contract()?.as_function();
            let want = p.scale(&Rational::from_integer(k.into())).truncated(got.order());
            bad += usize::from(got != want);
        }
        Ok(count_outcome(bad, total, claim("ι_R dP = k·P for homogeneous P of degree k")))
    });
}
