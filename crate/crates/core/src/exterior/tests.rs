use proptest::prelude::*;

use super::*;
use crate::algebra::{pham, rat, QSeries};
use crate::random::{rng, sparse_one_form, sparse_series};

const N: usize = 8;

fn x(n: usize, i: usize) -> QSeries {
    QSeries::var(n, i, N)
}

fn c(v: i64) -> Rational {
    rat(v, 1)
}

fn dx(n: usize, i: usize) -> QForm {
    QForm::dx(n, i, N)
}

fn f(s: QSeries) -> QForm {
    QForm::function(s)
}

#[test]
fn differential_of_functions() {
    let xy = &x(2, 0) * &x(2, 1);
    let got = exterior_derivative_of(&xy);
    let expected = QForm::one_form(vec![x(2, 1), x(2, 0)]).unwrap().truncated(N - 1);
    assert_eq!(got, expected);

    let q = &(&x(2, 0) * &x(2, 0)) + &(&x(2, 1) * &x(2, 1));
    let expected = QForm::one_form(vec![x(2, 0).scale(&c(2)), x(2, 1).scale(&c(2))])
        .unwrap()
        .truncated(N - 1);
    assert_eq!(exterior_derivative_of(&q), expected);

    let closed = QForm::one_form(vec![x(2, 1), x(2, 0)]).unwrap();
    assert!(closed.d().unwrap().is_zero());
}

#[test]
fn three_forms_have_no_derivative() {
    let vol = QForm::basis_form(3, &[0, 1, 2], QSeries::one(3, N)).unwrap();
    assert!(matches!(vol.d(), Err(Error::UnsupportedDegree(4))));
}

#[test]
fn wedge_products() {
    assert!(dx(2, 0).wedge(&dx(2, 0)).unwrap().is_zero());
    let a = dx(2, 0).wedge(&dx(2, 1)).unwrap();
    let b = dx(2, 1).wedge(&dx(2, 0)).unwrap();
    assert_eq!(a, b.neg());

    let left = QForm::one_form(vec![x(2, 1), x(2, 0)]).unwrap();
    let right = dx(2, 1).mul_function(&x(2, 0)).unwrap();
    let got = left.wedge(&right).unwrap();
    let expected = QForm::basis_form(2, &[0, 1], &x(2, 0) * &x(2, 1)).unwrap();
    assert_eq!(got, expected);

    let two = dx(4, 0).wedge(&dx(4, 1)).unwrap();
    let three = two.wedge(&dx(4, 2)).unwrap();
    assert!(matches!(three.wedge(&dx(4, 3)), Err(Error::UnsupportedDegree(4))));
}

#[test]
fn integrability_examples() {
    // Depends on two variables only.
    let p4: QSeries = pham(2, 3, 4, N);
    let w = exterior_derivative_of(&p4)
        .try_sub(&dx(3, 1).mul_function(&(&(&x(3, 0) * &x(3, 0)) * &(&x(3, 1) * &x(3, 1))).scale(&c(2))).unwrap())
        .unwrap();
    assert!(w.integrability_residual().unwrap().is_zero());

    let p: QSeries = pham(3, 3, 2, N);
    assert!(exterior_derivative_of(&p).integrability_residual().unwrap().is_zero());

    // y dx + x dy + xy dz = e^{-z} d(xy e^z) is integrable after all.
    let xy = &x(3, 0) * &x(3, 1);
    let w = QForm::one_form(vec![x(3, 1), x(3, 0), xy]).unwrap();
    assert!(w.integrability_residual().unwrap().is_zero());

    // y dx + z dy + x dz: expanding by hand, ω∧dω = -(x + y + z) dx∧dy∧dz.
    let w = QForm::one_form(vec![x(3, 1), x(3, 2), x(3, 0)]).unwrap();
    let res = w.integrability_residual().unwrap();
    let expected_coeff = -(&(&x(3, 0) + &x(3, 1)) + &x(3, 2));
    assert_eq!(res.coeff(&[0, 1, 2]), expected_coeff.truncated(N - 1));
}

#[test]
fn euler_contractions() {
    let q = &(&x(2, 0) * &x(2, 0)) + &(&x(2, 1) * &x(2, 1));
    let got = exterior_derivative_of(&q).euler_contract().unwrap().as_function();
    assert_eq!(got, q.scale(&c(2)));

    let p: QSeries = pham(3, 4, 3, N);
    let got = exterior_derivative_of(&p).euler_contract().unwrap().as_function();
    assert_eq!(got, p.scale(&c(3)));

    let area = dx(2, 0).wedge(&dx(2, 1)).unwrap();
    let got = area.euler_contract().unwrap();
    let expected = QForm::one_form(vec![-x(2, 1), x(2, 0)]).unwrap();
    assert!(got.try_sub(&expected).unwrap().is_zero());

    assert!(f(x(2, 0)).euler_contract().is_err());
}

#[test]
fn homogeneous_decompositions() {
    let xy = &x(2, 0) * &x(2, 1);
    let w = exterior_derivative_of(&xy).with_order(N).try_add(&dx(2, 0).mul_function(&(&xy * &xy)).unwrap()).unwrap();
    let dec = w.homogeneous_parts();
    assert_eq!(dec.leading, Some(1));
    assert_eq!(dec.parts.iter().map(|(m, _)| *m).collect::<Vec<_>>(), vec![1, 4]);
    let sum = dec.parts.iter().fold(QForm::zero(1, 2, N), |acc, (_, p)| acc.try_add(p).unwrap());
    assert_eq!(sum, w.truncated(sum.order()));

    let p4: QSeries = pham(2, 3, 4, N);
    let x2y2 = &(&x(3, 0) * &x(3, 0)) * &(&x(3, 1) * &x(3, 1));
    let w = exterior_derivative_of(&p4).try_sub(&dx(3, 1).mul_function(&x2y2.scale(&c(2))).unwrap()).unwrap();
    let dec = w.homogeneous_parts();
    // Coefficient degrees 3 (from dP) and 4 (from x²y² dy).
    assert_eq!(dec.leading, Some(3));
    assert_eq!(dec.parts.iter().map(|(m, _)| *m).collect::<Vec<_>>(), vec![3, 4]);

    assert_eq!(f(QSeries::one(2, N)).homogeneous_parts().leading, Some(0));
    let zero = QForm::zero(1, 2, N).homogeneous_parts();
    assert_eq!(zero.leading, None);
    assert!(zero.parts.is_empty());
}

#[test]
fn divisibility() {
    let p: QSeries = pham(3, 3, 2, N);
    let tilde = dx(3, 1).mul_function(&x(3, 0)).unwrap();
    let w = exterior_derivative_of(&p).try_add(&tilde.mul_function(&p).unwrap()).unwrap();
    let wedge = w.wedge(&exterior_derivative_of(&p)).unwrap();
    assert!(!wedge.is_zero());
    assert!(wedge.divisibility_residual(&p).unwrap().is_zero());

    let a = dx(2, 0).mul_function(&x(2, 0)).unwrap();
    assert_eq!(a.divisibility_residual(&x(2, 1)).unwrap(), a);

    let q = &(&x(2, 0) * &x(2, 0)) + &(&x(2, 1) * &x(2, 1));
    let a = dx(2, 0).mul_function(&q).unwrap();
    assert!(a.divisibility_residual(&q).unwrap().is_zero());
}

#[test]
fn pullback_matches_hand_computation() {
    // d(xy) under y = t x gives 2tx dx + x² dt.
    let w = exterior_derivative_of(&(&x(2, 0) * &x(2, 1)));
    let images = [x(2, 0), &x(2, 1) * &x(2, 0)];
    let got = w.pullback(&images, Composition::Strict).unwrap();
    let expected = QForm::one_form(vec![
        (&x(2, 0) * &x(2, 1)).scale(&c(2)),
        &x(2, 0) * &x(2, 0),
    ])
    .unwrap();
    assert!(got.try_sub(&expected).unwrap().is_zero());
}

fn random_function(seed: u64, n: usize) -> QSeries {
    let mut r = rng(seed);
    sparse_series(&mut r, n, N, 0, 5, 6)
}

fn random_form(seed: u64, n: usize, k: usize) -> QForm {
    let mut r = rng(seed);
    match k {
        0 => f(sparse_series(&mut r, n, N, 0, 5, 6)),
        1 => sparse_one_form(&mut r, n, N, 0, 4, 3),
        _ => {
            let a = sparse_one_form(&mut r, n, N, 0, 3, 2);
            let b = sparse_one_form(&mut r, n, N, 0, 3, 2);
            a.wedge(&b).unwrap()
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), n in 2usize..=4, k in 0usize..=1) {
        let w = random_form(seed, n, k);
        prop_assert!(w.d().unwrap().d().unwrap().is_zero());
    }

    #[test]
    fn wedge_is_graded_antisymmetric(seed in any::<u64>(), n in 2usize..=4, k in 0usize..=2, l in 0usize..=1) {
        let a = random_form(seed, n, k);
        let b = random_form(seed.wrapping_add(1), n, l);
        prop_assume!(k + l <= 3);
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let expected = if (k * l) % 2 == 1 { ba.neg() } else { ba };
        prop_assert_eq!(ab, expected);
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), n in 2usize..=4) {
        let a = random_function(seed, n);
        let b = random_function(seed ^ 0x9e37, n);
        let lhs = exterior_derivative_of(&(&a * &b));
        let rhs = exterior_derivative_of(&b).mul_function(&a).unwrap()
            .try_add(&exterior_derivative_of(&a).mul_function(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_identity_on_homogeneous(seed in any::<u64>(), n in 2usize..=5, deg in 2u32..=6) {
        let mut r = rng(seed);
        let p = sparse_series(&mut r, n, N, deg, deg, 5);
        prop_assume!(!p.is_zero());
        let got = exterior_derivative_of(&p).euler_contract().unwrap().as_function();
        prop_assert_eq!(got, p.scale(&c(deg as i64)));
    }

    #[test]
    fn multiplied_exact_forms_are_integrable(seed in any::<u64>(), n in 3usize..=4) {
        let mut r = rng(seed);
        let h = sparse_series(&mut r, n, N, 1, 4, 5);
        let g = sparse_series(&mut r, n, N, 0, 3, 4);
        let w = exterior_derivative_of(&h).mul_function(&g).unwrap();
        prop_assert!(w.integrability_residual().unwrap().is_zero());
    }
}
