use num_complex::Complex64;
use rand::Rng;

use super::case_seed;
use crate::algebra::{rat, GaussianRational, QSeries, Rational};
use crate::blowup::{blowup, contact_order, divisor_singularities, totally_real_surface, BlowupChart, GSeries, RealSurface};
use crate::error::{Error, Result};
use crate::exterior::{exterior_derivative_of, QForm};
use crate::first_integral::{focal_values_from_obstructions, solve_lie};
use crate::harness::expr::parse_form;
use crate::harness::report::Measured;
use crate::harness::runner::{Outcome, Runner};
use crate::harness::spec::ScenarioSpec;
use crate::numerics::{
    holonomy_germ, leaf_closedness_probe, parabolic_orbit_demo, poincare_return, HolonomyConfig, HolonomyGerm,
    LeafVerdict, OrbitVerdict, ReturnStatus, SeriesField,
};
use crate::random::{rng, small_coeff, sparse_series, SeededRng};

/// Seeds of the closedness probe.
pub const PROBE_GRID: [f64; 6] = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3];

pub const PROBE_TOL: f64 = 1e-8;

fn holonomy_checks(run: &mut Runner, chart: Option<&BlowupChart>, cfg: &HolonomyConfig, dep: &str) {
    let mut germ: Option<HolonomyGerm> = None;
    run.check("holonomy-fit", &[dep], || {
        let g = holonomy_germ(chart.expect("set by dependency"), cfg)?;
        let ok = g.dropped.is_empty();
        let out = Outcome::exact(ok, "every fan seed survives the loop")
            .value(Measured::Number(g.fit_residual))
            .detail(format!("{} samples, degree {} fit", g.samples.len(), g.coefficients.len()));
        germ = Some(g);
        Ok(out)
    });
    let g = || germ.as_ref().expect("set by holonomy-fit");
    run.check("holonomy-multiplier", &["holonomy-fit"], || {
        let a1 = g().multiplier();
        Ok(Outcome::within((a1 + 1.0).norm(), 1e-6, "|a₁ + 1| for the fitted holonomy germ")
            .detail(format!("a₁ = {:.12} {:+.12}i", a1.re, a1.im)))
    });
    run.check("period-two", &["holonomy-fit"], || {
        Ok(Outcome::within(g().period_two_defect, 1e-8, "|h(h(z)) − z| over the fan"))
    });
}

fn holonomy_config(spec: &ScenarioSpec) -> HolonomyConfig {
    HolonomyConfig { integrator: spec.integrator, ..HolonomyConfig::default() }
}

pub(super) fn saddle_holonomy(spec: &ScenarioSpec, run: &mut Runner) {
    let order = spec.order;
    let mut chart = None;
    run.check("blowup-chart", &[], || {
        let c = blowup(&parse_form("d(x*y)")?.to_form(order)?, 0)?;
        // y = t·x turns d(xy) into x·(2t dx + x dt); t prints as y.
        let expected = parse_form("2*y*dx + x*dy")?.to_form(c.strict_transform.order())?;
        let ok = c.divisor_power == 1 && !c.dicritical && c.strict_transform.try_sub(&expected)?.is_zero();
        chart = Some(c);
        Ok(Outcome::exact(ok, "strict transform in y = t·x is 2t dx + x dt with divisor power 1"))
    });
    run.check("divisor-siegel", &["blowup-chart"], || {
        let sing = divisor_singularities(chart.as_ref().expect("set by blowup-chart"))?;
        let [s] = sing.as_slice() else {
            return Ok(Outcome::exact(false, "one divisor singularity").detail(format!("found {}", sing.len())));
        };
        let ratio = s.ratio.ok_or_else(|| Error::Precondition("degenerate divisor singularity".into()))?;
        Ok(Outcome::within((ratio + 2.0).norm(), 1e-12, "Siegel point at t = 0 with eigenvalue ratio −2")
            .detail(format!("t = {}, siegel = {}", s.t, s.siegel)))
    });
    holonomy_checks(run, chart.as_ref(), &holonomy_config(spec), "blowup-chart");
}

pub(super) fn linear_center(spec: &ScenarioSpec, run: &mut Runner) {
    let order = spec.order;
    let mut omega = None;
    run.check("focal-values", &[], || {
        let w = parse_form("d(x^2 + y^2)")?.to_form(order)?;
        let obs = focal_values_from_obstructions(&w, order)?;
        omega = Some(w);
        let (x, y) = (QSeries::var(2, 0, order), QSeries::var(2, 1, order));
        let lie = solve_lie(&[-y, x], order)?;
        Ok(Outcome::exact(obs.all_zero() && lie.all_zero(), format!("all focal values vanish through N = {order} by both methods")))
    });
    run.check("displacement", &["focal-values"], || {
        let field = SeriesField::from_form(omega.as_ref().expect("set by focal-values"))?;
        let s = poincare_return(&field, spec.x0.unwrap_or(0.2), &spec.integrator)?;
        let d = match (s.status, s.displacement) {
            (ReturnStatus::Returned, Some(d)) => d,
            _ => return Ok(Outcome::exact(false, "orbit returns to the section").detail(format!("{:?}", s.status))),
        };
        Ok(Outcome::within(d.abs(), 1e-10, "|P(x₀) − x₀|"))
    });
    let mut chart = None;
    run.check("blowup-chart", &["focal-values"], || {
        let c = blowup(omega.as_ref().expect("set by focal-values"), 0)?;
        let ok = c.divisor_power == 1 && !c.dicritical;
        chart = Some(c);
        Ok(Outcome::exact(ok, "non-dicritical chart with divisor power 1"))
    });
    // The unit loop passes through the poles t = ±i; go around t = i instead.
    let cfg = HolonomyConfig { center: (0.0, 1.0), ..holonomy_config(spec) };
    holonomy_checks(run, chart.as_ref(), &cfg, "blowup-chart");
}

/// `(1 + u)·dH` with `H = x² + y² + ¼·(cubic..quintic)` and `u = ¼·(linear..quadratic)`.
fn seeded_center(r: &mut SeededRng, order: usize) -> Result<QForm> {
    let quarter = rat(1, 4);
    let (x, y) = (QSeries::var(2, 0, order + 1), QSeries::var(2, 1, order + 1));
    let h = &(&(&x * &x) + &(&y * &y)) + &sparse_series(r, 2, order + 1, 3, 5, 3).scale(&quarter);
    let u = sparse_series(r, 2, order, 1, 2, 2).scale(&quarter);
    exterior_derivative_of(&h).mul_function(&(&QSeries::one(2, order) + &u))
}

/// `Ham(H) + c·r²·(x∂x + y∂y)` with `H = r²/2 + ¼·(cubic..quintic)`.
fn seeded_weak_focus(r: &mut SeededRng, order: usize) -> [QSeries; 2] {
    let (x, y) = (QSeries::var(2, 0, order + 1), QSeries::var(2, 1, order + 1));
    let r2 = &(&x * &x) + &(&y * &y);
    let h = &r2.scale(&rat(1, 2)) + &sparse_series(r, 2, order + 1, 3, 5, 3).scale(&rat(1, 4));
    let push = r2.scale(&small_coeff(r));
    [
        (&-h.partial(1).expect("planar") + &(&push * &x)).truncated(order),
        (&h.partial(0).expect("planar") + &(&push * &y)).truncated(order),
    ]
}

pub(super) fn closedness_equivalence(spec: &ScenarioSpec, run: &mut Runner) {
    let order = spec.order;
    let (centers, foci) = (spec.cases.unwrap_or(10), spec.count.unwrap_or(5));
    let mut forms = Vec::new();
    run.check("centers-focal-zero", &[], || {
        let mut bad = 0;
        for i in 0..centers {
            let w = seeded_center(&mut rng(case_seed(spec, i)), order)?;
            bad += usize::from(!focal_values_from_obstructions(&w, order)?.all_zero());
            forms.push(w);
        }
        Ok(Outcome::exact(bad == 0, format!("all focal values vanish through N = {order}"))
            .value(Measured::Integer((centers - bad) as i64)))
    });
    run.check("centers-closed", &["centers-focal-zero"], || {
        let mut bad = Vec::new();
        let mut worst: f64 = 0.0;
        for (i, w) in forms.iter().enumerate() {
            let probe = leaf_closedness_probe(&SeriesField::from_form(w)?, &PROBE_GRID, PROBE_TOL, &spec.integrator)?;
            for r in &probe.results {
                worst = worst.max(r.sample.displacement.map_or(f64::INFINITY, f64::abs));
            }
            if !probe.all(LeafVerdict::Closed) {
                bad.push(i);
            }
        }
        let out = Outcome::exact(bad.is_empty(), format!("every leaf on the grid closes within {PROBE_TOL:e}"))
            .value(Measured::Number(worst));
        Ok(if bad.is_empty() { out } else { out.detail(format!("not closed: cases {bad:?}")) })
    });
    run.check("foci-spiral", &[], || {
        let mut bad = Vec::new();
        for i in 0..foci {
            let field = seeded_weak_focus(&mut rng(case_seed(spec, centers + i)), order);
            let lie = solve_lie(&field, order)?;
            let Some(first) = lie.first_nonzero() else {
                bad.push(i);
                continue;
            };
            let predicted = if first.value > Rational::from_integer(0.into()) { 1.0 } else { -1.0 };
            let probe = leaf_closedness_probe(&SeriesField::new(&field)?, &PROBE_GRID, PROBE_TOL, &spec.integrator)?;
            if !(probe.all(LeafVerdict::RecurrentNonclosed) && probe.spiral_sign() == Some(predicted)) {
                bad.push(i);
            }
        }
        let out = Outcome::exact(bad.is_empty(), "weak foci spiral with the sign of the first focal value")
            .value(Measured::Integer((foci - bad.len()) as i64));
        Ok(if bad.is_empty() { out } else { out.detail(format!("mismatched cases {bad:?}")) })
    });
}

fn gaussian(q: &QSeries) -> GSeries {
    q.map_coeffs(|c| GaussianRational::real(c.clone()))
}

/// `a·x + b·y + (p + i·q)` with `p, q` sparse of degree 2..3.
fn seeded_branch(r: &mut SeededRng, order: usize) -> GSeries {
    let (x, y) = (QSeries::var(2, 0, order), QSeries::var(2, 1, order));
    let lin = &x.scale(&small_coeff(r)) + &y.scale(&small_coeff(r));
    let re = gaussian(&(&lin + &sparse_series(r, 2, order, 2, 3, 2)));
    let im = gaussian(&sparse_series(r, 2, order, 2, 3, 2)).scale(&GaussianRational::i());
    &re + &im
}

fn random_point(r: &mut SeededRng) -> Complex64 {
    Complex64::from_polar(r.gen_range(0.1..0.5), r.gen_range(0.0..std::f64::consts::TAU))
}

pub(super) fn totally_real(spec: &ScenarioSpec, run: &mut Runner) {
    let (order, total) = (spec.order, spec.cases.unwrap_or(10));
    let mut r = rng(spec.seed);
    run.check("fg-identity", &[], || {
        let mut bad = 0;
        let mut built = 0;
        while built < total {
            let (f, g) = (seeded_branch(&mut r, order), seeded_branch(&mut r, order));
            let data = match totally_real_surface(&f, &g) {
                Err(Error::GeneralPosition) => continue,
                other => other?,
            };
            built += 1;
            let sum = &(&data.x * &data.x) + &(&data.y * &data.y);
            bad += usize::from(!(data.identity_holds && sum == &f * &g));
        }
        Ok(Outcome::exact(bad == 0, "f·g = X² + Y² for transverse pairs").value(Measured::Integer((total - bad) as i64)))
    });
    let w = exterior_derivative_of(&(&QSeries::var(2, 0, order + 1) * &QSeries::var(2, 1, order + 1))).complexify();
    let (gx, gy) = (GSeries::var(2, 0, order), GSeries::var(2, 1, order));
    let samples: Vec<Complex64> = (0..5).map(|_| random_point(&mut r)).collect();
    run.check("contact-one", &[], || {
        let surface = RealSurface::from(&totally_real_surface(&gx, &gy)?);
        let mut dims = Vec::new();
        for p in &samples {
            dims.push(contact_order(&w, &surface, [*p, p.conj()])?.dimension);
        }
        Ok(Outcome::exact(dims.iter().all(|d| *d == 1), "contact order 1 on y = x̄ for d(xy) at 5 points").text(format!("{dims:?}")))
    });
    run.check("contact-separatrix", &[], || {
        let surface = RealSurface::complex_curve(&gy)?;
        let mut dims = Vec::new();
        for p in &samples {
            dims.push(contact_order(&w, &surface, [*p, Complex64::new(0.0, 0.0)])?.dimension);
        }
        Ok(Outcome::exact(dims.iter().all(|d| *d == 2), "contact order 2 on the separatrix y = 0").text(format!("{dims:?}")))
    });
}

fn parse_real(s: &str) -> Result<f64> {
    let bad = || Error::Scenario(format!("bad coefficient `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => Ok(p.trim().parse::<f64>().map_err(|_| bad())? / q.trim().parse::<f64>().map_err(|_| bad())?),
        None => s.trim().parse().map_err(|_| bad()),
    }
}

pub(super) fn parabolic_demo(spec: &ScenarioSpec, run: &mut Runner) {
    let seed = spec.x0.unwrap_or(-0.1);
    let iterations = spec.count.unwrap_or(200);
    run.check("orbit-monotone", &[], || {
        let coeffs = spec.coeffs.iter().flatten().map(|c| parse_real(c)).collect::<Result<Vec<f64>>>()?;
        let class = parabolic_orbit_demo(&coeffs, seed, iterations, 1.0)?;
        let toward_zero = class.orbit.windows(2).all(|w| w[1].abs() < w[0].abs() && w[0] * w[1] > 0.0);
        let ok = class.verdict == OrbitVerdict::MonotoneConvergent
            && toward_zero
            && !class.closed
            && class.orbit.len() == iterations + 1
            && class.orbit[1..].iter().all(|z| *z != seed);
        Ok(Outcome::exact(ok, format!("real orbit from {seed} is strictly monotone toward 0 and never returns"))
            .value(Measured::Number(*class.orbit.last().expect("seeded"))))
    });
    run.check("identity-constant", &[], || {
        let class = parabolic_orbit_demo(&[1.0], seed, iterations, 1.0)?;
        let ok = class.verdict == OrbitVerdict::Constant && class.closed && class.orbit.iter().all(|z| *z == seed);
        Ok(Outcome::exact(ok, "identity germ has a constant orbit"))
    });
}
