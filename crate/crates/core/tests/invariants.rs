use foliation::algebra::{rat, Composition, QSeries};
use foliation::blowup::{blowup, chart_map};
use foliation::exterior::exterior_derivative_of;
use foliation::first_integral::solve_gdf;
use foliation::numerics::{integrate, poincare_return, IntegratorConfig, Poly, ReturnStatus, SeriesField};
use foliation::random::{rng, sparse_series};

const GRID: [f64; 6] = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3];

fn var(i: usize, order: usize) -> QSeries {
    QSeries::var(2, i, order)
}

#[test]
fn first_integral_is_constant_on_strict_transform_leaves() {
    let order = 10;
    // Working order high enough that ω and the chart map stay exact polynomials.
    let wide = 4 * order;
    let (x, y) = (var(0, wide), var(1, wide));
    let h = &(&(&x * &y) + &(&x * &(&x * &x))) + &(&(&y * &y) * &(&y * &y));
    let unit = &(&QSeries::one(2, wide) + &x) - &y;
    let omega = exterior_derivative_of(&h).mul_function(&unit.truncated(wide - 1)).unwrap();

    let out = solve_gdf(&omega.truncated(order), &(&var(0, order + 1) * &var(1, order + 1)), order).unwrap();
    assert!(out.is_solved() && out.residual_is_zero);

    let chart = blowup(&omega, 0).unwrap();
    assert_eq!(chart.divisor_power, 1);
    let lifted = out.f.with_order(wide).substitute(&chart_map(2, 0, wide), Composition::Strict).unwrap();
    let f = Poly::from_series(&lifted);

    let field = SeriesField::from_form(&chart.strict_transform).unwrap();
    for start in [[0.05, 0.3], [0.04, -0.5], [-0.05, 0.8]] {
        let traj = integrate(&field, 0.0, &start, 1.0, &IntegratorConfig::default()).unwrap();
        let f0 = f.eval_real(&start);
        let drift = traj.states.iter().map(|p| (f.eval_real(p) - f0).abs()).fold(0.0, f64::max);
        let length: f64 = traj.states.windows(2).map(|w| ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt()).sum();
        assert!(length > 0.0);
        assert!(drift / length <= 1e-7, "start {start:?}: drift {drift:e} over arclength {length}");
    }
}

#[test]
fn exact_forms_return_to_the_section() {
    let order = 10;
    let (x, y) = (var(0, order + 1), var(1, order + 1));
    let q = &(&x * &x) + &(&y * &y);
    for seed in 0..5 {
        let h = &q + &sparse_series(&mut rng(seed), 2, order + 1, 3, 5, 3).scale(&rat(1, 4));
        let w = exterior_derivative_of(&h);
        let out = solve_gdf(&w, &q, order).unwrap();
        assert!(out.is_solved(), "seed {seed}");
        let field = SeriesField::from_form(&w).unwrap();
        for x0 in GRID {
            let s = poincare_return(&field, x0, &IntegratorConfig::default()).unwrap();
            assert_eq!(s.status, ReturnStatus::Returned, "seed {seed} x0 {x0}");
            let d = s.displacement.unwrap();
            assert!(d.abs() <= 1e-8, "seed {seed} x0 {x0}: {d:e}");
        }
    }
}
