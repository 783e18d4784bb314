use num_traits::{Signed, Zero};
use proptest::prelude::*;

use super::*;
use crate::algebra::{pham, rat, Composition, MultiIndex};
use crate::error::Error;
use crate::exterior::exterior_derivative_of;
use crate::random::{rng, small_coeff, sparse_series};

fn x(n: usize, i: usize, order: usize) -> QSeries {
    QSeries::var(n, i, order)
}

fn c(v: i64) -> Rational {
    rat(v, 1)
}

fn sum_of_squares(n: usize, order: usize) -> QSeries {
    (0..n).fold(QSeries::zero(n, order), |acc, i| &acc + &(&x(n, i, order) * &x(n, i, order)))
}

/// The counterexample form `d(x⁴+y⁴) − 2x²y² dy` in `n` variables.
fn counterexample(n: usize, order: usize) -> (QForm, QSeries) {
    let p: QSeries = pham(2, n, 4, order + 1);
    let (x0, x1) = (x(n, 0, order), x(n, 1, order));
    let x2y2 = &(&x0 * &x0) * &(&x1 * &x1);
    let w = exterior_derivative_of(&p)
        .try_sub(&QForm::dx(n, 1, order).mul_function(&x2y2.scale(&c(2))).unwrap())
        .unwrap();
    (w, p)
}

/// Recomputes `ω − g·df` without touching solver internals.
fn recomputed_residual(w: &QForm, f: &QSeries, g: &QSeries, order: usize) -> QForm {
    let df = QForm::one_form((0..f.nvars()).map(|i| f.partial(i).unwrap().truncated(order)).collect()).unwrap();
    let gdf = QForm::one_form(
        df.components()
            .iter()
            .map(|comp| comp.with_order(order).try_mul(&g.with_order(order)).unwrap())
            .collect(),
    )
    .unwrap();
    w.truncated(order).try_sub(&gdf).unwrap()
}

#[test]
fn exact_quadratic_is_solved_trivially() {
    let q = sum_of_squares(2, 9);
    let out = solve_gdf(&exterior_derivative_of(&q), &q, 8).unwrap();
    assert!(out.is_solved() && out.residual_is_zero);
    assert_eq!(out.f, q.truncated(9));
    assert_eq!(out.g, QSeries::one(2, 7));
}

#[test]
fn exact_form_recovers_its_potential() {
    let n = 10;
    let xy = &x(2, 0, n + 1) * &x(2, 1, n + 1);
    let h = &xy + &(&xy * &xy);
    let out = solve_gdf(&exterior_derivative_of(&h), &xy, n).unwrap();
    assert!(out.is_solved());
    assert_eq!(out.f, h);
    assert_eq!(out.g, QSeries::one(2, n - 1));
}

#[test]
fn counterexample_is_obstructed_at_degree_four() {
    let (w, p) = counterexample(3, 12);
    let out = solve_gdf(&w, &p, 12).unwrap();
    assert_eq!(out.status, Status::Obstructed);
    let obs = out.obstruction.unwrap();
    assert_eq!(obs.degree, 4);
    assert!(!obs.residual.is_zero());
    assert!(obs.focal_values.iter().all(|v| !v.is_zero()));

    // Dense oracle: ω_4 is outside span{d(μ) : deg μ = 5} + span{μ·dQ : deg μ = 1}.
    let keys: Vec<(usize, MultiIndex)> = (0..3)
        .flat_map(|i| MultiIndex::all_of_degree(3, 4).into_iter().map(move |m| (i, m)))
        .collect();
    let row = |form: &QForm| -> Vec<Rational> {
        keys.iter().map(|(i, m)| form.component(*i).coeff(m)).collect()
    };
    let mut rows: Vec<Vec<Rational>> = MultiIndex::all_of_degree(3, 5)
        .into_iter()
        .map(|m| row(&exterior_derivative_of(&QSeries::monomial(3, 12, m, c(1)))))
        .collect();
    let dq = exterior_derivative_of(&p);
    for i in 0..3 {
        rows.push(row(&dq.mul_function(&x(3, i, 12)).unwrap()));
    }
    let before = crate::algebra::linsolve::rank(&rows);
    rows.push(row(&w.homogeneous_part(4)));
    assert_eq!(crate::algebra::linsolve::rank(&rows), before + 1);
}

#[test]
fn counterexample_lie_oracle_agrees_on_index() {
    let (w, p) = counterexample(2, 12);
    let field = dual_field(&w).unwrap();
    let stages = lie_obstructions(&field, &p, 12).unwrap();
    let first = stages.iter().find(|s| !s.value().is_zero()).unwrap();
    let planar = solve_gdf(&w, &p, 12).unwrap();
    assert_eq!(first.index, planar.obstruction.unwrap().degree + 1);
    assert_eq!(first.index, 5);
}

#[test]
fn solver_preconditions() {
    let q = sum_of_squares(3, 6);
    let w = exterior_derivative_of(&q).scale(&c(2));
    assert!(matches!(solve_gdf(&w, &q, 4), Err(Error::Precondition(_))));

    // d(x²+y²+z²) + z² dx: ω∧dω = 4yz dx∧dy∧dz.
    let z = x(3, 2, 5);
    let w = exterior_derivative_of(&q)
        .truncated(5)
        .try_add(&QForm::dx(3, 0, 5).mul_function(&(&z * &z)).unwrap())
        .unwrap();
    assert!(matches!(solve_gdf(&w, &q, 5), Err(Error::NotIntegrable { .. })));
    assert!(matches!(
        solve_gdf(&QForm::zero(1, 3, 5), &q, 5),
        Err(Error::ZeroForm)
    ));
}

#[test]
fn pham_perturbation_is_solved() {
    // ω = dP + P·dh = e^{-h} d(P e^h) is integrable with a first integral.
    let order = 8;
    let mut r = rng(7);
    let p: QSeries = pham(3, 4, 3, order + 1);
    let h = sparse_series(&mut r, 4, order + 1, 1, 3, 4);
    let w = exterior_derivative_of(&p)
        .try_add(&exterior_derivative_of(&h).mul_function(&p.truncated(order)).unwrap())
        .unwrap();
    let out = solve_gdf(&w, &p, order).unwrap();
    assert!(out.is_solved() && out.residual_is_zero);
    assert!(recomputed_residual(&w, &out.f, &out.g, order).is_zero());
}

#[test]
fn gauge_alignment_recovers_multiplier() {
    let order = 7;
    let n = 3;
    let q = sum_of_squares(n, order + 1);
    // u = x₁x₂ + x₃² + (x₁²+x₂²+x₃²) so that the kernel direction Q is hit.
    let u = &(&x(n, 0, order) * &x(n, 1, order)) + &(&(&x(n, 2, order) * &x(n, 2, order)) + &q.truncated(order));
    let h = &q + &(&x(n, 0, order + 1) * &(&x(n, 1, order + 1) * &x(n, 2, order + 1)));
    let one_plus_u = &QSeries::one(n, order) + &u;
    let w = exterior_derivative_of(&h).mul_function(&one_plus_u).unwrap();
    let out = solve_gdf(&w, &q, order).unwrap();
    assert!(out.is_solved());
    let (f, g) = align_gauge(&out.f, &out.g, &h).unwrap();
    assert_eq!(f, h.truncated(f.order()));
    assert!(g.agrees_through(&one_plus_u, g.order()));

    let not_function = &q + &x(n, 0, order + 1).mul_monomial(&MultiIndex::new(&[2, 0, 0]), &c(1));
    assert!(align_gauge(&h, &QSeries::one(n, order), &not_function).is_err());
}

#[test]
fn lyapunov_examples() {
    let n = 10;
    let (xx, yy) = (x(2, 0, n), x(2, 1, n));
    let rotation = [-&yy, xx.clone()];
    assert!(solve_lie(&rotation, n).unwrap().all_zero());

    // By hand: F = r² + F_4 with X_3(r²) = 2r⁴, so V_4 = 2.
    let r2 = &(&xx * &xx) + &(&yy * &yy);
    let focus = [&(-&yy) + &(&r2 * &xx), &xx + &(&r2 * &yy)];
    let v = solve_lie(&focus, n).unwrap();
    assert_eq!(v.first_nonzero().unwrap().index, 4);
    assert_eq!(v.get(4), Some(&c(2)));
    assert!(v.values.iter().skip(1).all(|fv| fv.conditional));

    // Hamiltonian field of H = (x²+y²)/2 + x⁴/2.
    let h = &r2.scale(&rat(1, 2)) + &(&(&xx * &xx) * &(&xx * &xx)).scale(&rat(1, 2));
    let ham = [-h.partial(1).unwrap(), h.partial(0).unwrap()];
    assert!(solve_lie(&ham, n - 1).unwrap().all_zero());

    let tilted = [yy.clone(), -&xx];
    assert!(matches!(solve_lie(&tilted, n), Err(Error::Precondition(_))));
}

#[test]
fn obstruction_focal_values_examples() {
    let n = 10;
    let q = sum_of_squares(2, n + 1);
    assert!(focal_values_from_obstructions(&exterior_derivative_of(&q), n).unwrap().all_zero());
    let exact = &q * &(&QSeries::one(2, n + 1) + &x(2, 0, n + 1));
    assert!(focal_values_from_obstructions(&exterior_derivative_of(&exact), n).unwrap().all_zero());

    let (xx, yy) = (x(2, 0, n), x(2, 1, n));
    let r2 = &(&xx * &xx) + &(&yy * &yy);
    let focus = [&(-&yy) + &(&r2 * &xx), &xx + &(&r2 * &yy)];
    let obs = focal_values_from_obstructions(&center_form(&focus).unwrap(), n).unwrap();
    let lie = solve_lie(&focus, n).unwrap();
    assert_eq!(obs.first_nonzero().unwrap().index, lie.first_nonzero().unwrap().index);
}

#[test]
fn circle_average_of_powers() {
    let (xx, yy) = (x(2, 0, 8), x(2, 1, 8));
    let r2 = &(&xx * &xx) + &(&yy * &yy);
    assert_eq!(circle_average(&(&r2 * &r2), 4), c(1));
    // mean of cos⁴ is 3/8, of cos²sin² is 1/8
    assert_eq!(circle_average(&(&(&xx * &xx) * &(&xx * &xx)), 4), rat(3, 8));
    assert_eq!(circle_average(&(&(&xx * &xx) * &(&yy * &yy)), 4), rat(1, 8));
    assert_eq!(circle_average(&(&xx * &yy), 2), c(0));
}

/// Seeded planar field `Ham(H) + c·r^{2j}·(x∂x + y∂y)`; its first focal
/// value sits at index `2j + 2`.
fn seeded_field(seed: u64, j: usize, order: usize) -> [QSeries; 2] {
    let mut r = rng(seed);
    let (xx, yy) = (x(2, 0, order + 1), x(2, 1, order + 1));
    let r2 = &(&xx * &xx) + &(&yy * &yy);
    let h = &r2.scale(&rat(1, 2)) + &sparse_series(&mut r, 2, order + 1, 3, 5, 4);
    let mut radial = small_coeff(&mut r);
    if radial.is_zero() {
        radial = c(1);
    }
    let mut rj = QSeries::one(2, order + 1);
    for _ in 0..j {
        rj = &rj * &r2;
    }
    let rj = rj.scale(&radial);
    [
        (&-h.partial(1).unwrap() + &(&rj * &xx).truncated(order)).truncated(order),
        (&h.partial(0).unwrap() + &(&rj * &yy).truncated(order)).truncated(order),
    ]
}

#[test]
fn oracles_agree_on_seeded_fields() {
    let order = 9;
    let mut ratios: std::collections::BTreeMap<usize, Rational> = Default::default();
    for seed in 0..20u64 {
        let j = 1 + (seed as usize % 3);
        let field = seeded_field(seed, j, order);
        let lie = solve_lie(&field, order).unwrap();
        let obs = focal_values_from_obstructions(&center_form(&field).unwrap(), order).unwrap();
        let (a, b) = (lie.first_nonzero().unwrap(), obs.first_nonzero().unwrap());
        assert_eq!(a.index, b.index, "seed {seed}");
        assert_eq!(a.index, 2 * j + 2, "seed {seed}");
        let ratio = b.value.clone() / a.value.clone();
        let expected = ratios.entry(a.index).or_insert_with(|| ratio.clone());
        assert_eq!(&ratio, expected, "seed {seed} index {}", a.index);
    }
    assert!(ratios.values().all(|r| *r == c(-1)));
}

#[test]
fn morse_examples() {
    let q = sum_of_squares(2, 6);
    let phi = morse_normalize(&q, 6).unwrap();
    assert_eq!(phi, CoordinateChange::identity(2, 6));

    let f = &q + &(&x(2, 0, 6) * &(&x(2, 0, 6) * &x(2, 0, 6)));
    let phi = morse_normalize(&f, 6).unwrap();
    assert_eq!(phi.images[0].coeff(&MultiIndex::new(&[2, 0])), rat(-1, 2));
    assert!(phi.apply(&f).unwrap().agrees_through(&q, 6));
    assert!(phi.is_inverse_pair().unwrap());

    let q3 = sum_of_squares(3, 8);
    let x1 = x(3, 0, 8);
    let f = &q3 + &(&(&x1 * &x1) * &(&x1 * &x1));
    let phi = morse_normalize(&f, 8).unwrap();
    assert!(phi.apply(&f).unwrap().agrees_through(&q3, 8));
    assert!(phi.is_inverse_pair().unwrap());

    let cusp = &(&x(2, 0, 6) * &x(2, 0, 6)) + &(&x(2, 1, 6) * &(&x(2, 1, 6) * &x(2, 1, 6)));
    assert_eq!(morse_normalize(&cusp, 6), Err(Error::RankDeficient { rank: 1, nvars: 2 }));
}

#[test]
fn morse_then_solve_gives_dq() {
    // h*(ω) = g·dQ for ω = (1+u)·d(Q + x₁x₂x₃).
    let order = 6;
    let n = 3;
    let q = sum_of_squares(n, order + 1);
    let f = &q + &(&x(n, 0, order + 1) * &(&x(n, 1, order + 1) * &x(n, 2, order + 1)));
    let u = x(n, 0, order).scale(&rat(1, 2));
    let w = exterior_derivative_of(&f).mul_function(&(&QSeries::one(n, order) + &u)).unwrap();
    let phi = morse_normalize(&f, order + 1).unwrap();
    let pulled = w.pullback(&phi.images, Composition::Strict).unwrap().truncated(order);
    let out = solve_gdf(&pulled, &q, order).unwrap();
    assert!(out.is_solved());
    let r = recomputed_residual(&pulled, &q.with_order(order + 1), &out.g, order);
    assert!(r.is_zero());
}

#[test]
fn restriction_examples() {
    let n = 6;
    let q3 = sum_of_squares(3, n + 1);
    let q2 = sum_of_squares(2, n + 1);
    let got = restrict_hyperplane(&exterior_derivative_of(&q3), &[c(0), c(0)]).unwrap();
    assert_eq!(got, exterior_derivative_of(&q2));

    // d(x₁²+x₂²) + x₃² dx₁ on x₃ = x₁.
    let z = x(3, 2, n);
    let w = exterior_derivative_of(&sum_of_squares(3, n + 1).try_sub(&(&z * &z).with_order(n + 1)).unwrap())
        .try_add(&QForm::dx(3, 0, n).mul_function(&(&z * &z)).unwrap())
        .unwrap();
    let got = restrict_hyperplane(&w, &[c(1), c(0)]).unwrap();
    let x1 = x(2, 0, n);
    let expected = exterior_derivative_of(&q2)
        .try_add(&QForm::dx(2, 0, n).mul_function(&(&x1 * &x1)).unwrap())
        .unwrap();
    assert_eq!(got, expected);

    assert!(restrict_hyperplane(&w, &[c(1)]).is_err());
}

#[test]
fn restriction_commutes_with_complexification_on_examples() {
    let n = 6;
    let q = sum_of_squares(2, n + 1);
    let y = x(2, 1, n);
    let w = exterior_derivative_of(&q)
        .try_add(&QForm::dx(2, 1, n).mul_function(&(&y * &(&y * &y))).unwrap())
        .unwrap();
    // A planar form restricted to the diagonal lives on a line.
    assert!(complexify_restrict_commutes(&w, &[c(1)]).unwrap());
    let (w3, _) = counterexample(3, 8);
    assert!(complexify_restrict_commutes(&w3, &[rat(1, 2), rat(-3, 1)]).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_forms_are_solved_with_trivial_multiplier(seed in any::<u64>(), n in 2usize..=4) {
        let order = 6;
        let mut r = rng(seed);
        let q = sum_of_squares(n, order + 1);
        let h = &q + &sparse_series(&mut r, n, order + 1, 3, order as u32 + 1, 6);
        let out = solve_gdf(&exterior_derivative_of(&h), &q, order).unwrap();
        prop_assert!(out.is_solved());
        prop_assert_eq!(out.f, h);
        prop_assert_eq!(out.g, QSeries::one(n, order - 1));
    }

    #[test]
    fn multiplied_forms_are_solved_up_to_gauge(seed in any::<u64>(), n in 2usize..=3) {
        let order = 6;
        let mut r = rng(seed);
        let q = sum_of_squares(n, order + 1);
        let h = &q + &sparse_series(&mut r, n, order + 1, 3, order as u32 + 1, 4);
        let u = sparse_series(&mut r, n, order, 1, 3, 3);
        let one_plus_u = &QSeries::one(n, order) + &u;
        let w = exterior_derivative_of(&h).mul_function(&one_plus_u).unwrap();
        let out = solve_gdf(&w, &q, order).unwrap();
        prop_assert!(out.is_solved() && out.residual_is_zero);
        prop_assert!(recomputed_residual(&w, &out.f, &out.g, order).is_zero());
        let (f, g) = align_gauge(&out.f, &out.g, &h).unwrap();
        prop_assert_eq!(f, h.truncated(order + 1));
        prop_assert!(g.agrees_through(&one_plus_u, g.order()));
    }

    #[test]
    fn complexification_commutes_with_restriction(seed in any::<u64>(), n in 2usize..=4) {
        let order = 5;
        let mut r = rng(seed);
        let comps = (0..n).map(|_| sparse_series(&mut r, n, order, 0, 4, 3)).collect();
        let w = QForm::one_form(comps).unwrap();
        let coeffs: Vec<Rational> = (0..n - 1).map(|_| crate::random::random_rational(&mut r, 3, 4)).collect();
        prop_assert!(complexify_restrict_commutes(&w, &coeffs).unwrap());
    }

    #[test]
    fn morse_normalization_is_exact(seed in any::<u64>(), n in 2usize..=3) {
        let order = 6;
        let mut r = rng(seed);
        let q = sum_of_squares(n, order);
        let f = &q + &sparse_series(&mut r, n, order, 3, order as u32, 5);
        let phi = morse_normalize(&f, order).unwrap();
        prop_assert!(phi.apply(&f).unwrap().agrees_through(&q, order));
        prop_assert!(phi.is_inverse_pair().unwrap());
        let back = phi.apply_inverse(&q).unwrap();
        prop_assert!(back.agrees_through(&f, order));
        prop_assert!(phi.images.iter().all(|s| s.constant_term().abs().is_zero()));
    }
}
