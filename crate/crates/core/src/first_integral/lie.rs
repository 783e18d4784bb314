//! Lie-derivative recursion: an oracle for the stage solver that works on
//! the dual vector field instead of the form.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{FocalMethod, FocalValueSequence};
use crate::algebra::linsolve::ImageBasis;
use crate::algebra::{check_order, MultiIndex, QSeries, Rational};
use crate::error::{Error, Result};
use crate::exterior::QForm;

/// `(n−1)!!` with the convention `(−1)!! = 1`.
fn double_factorial_below(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n as i64 - 1;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// Mean of the degree-`degree` part of a planar series over the unit circle.
///
/// `x^a y^b` averages to `(a−1)!!(b−1)!!/(a+b)!!` when `a` and `b` are both
/// even and to zero otherwise.
pub fn circle_average(p: &QSeries, degree: usize) -> Rational {
    assert_eq!(p.nvars(), 2, "circle average needs a planar series");
    let mut acc = Rational::zero();
    for (m, c) in p.bucket(degree) {
        let (a, b) = (m.get(0), m.get(1));
        if a % 2 == 1 || b % 2 == 1 {
            continue;
        }
        let num = double_factorial_below(a) * double_factorial_below(b);
        let den = double_factorial_below(a + b + 1);
        acc += &(c.clone() * Rational::new(num, den));
    }
    acc
}

/// Planar field `X = b∂x − a∂y` of `ω = a dx + b dy`, so that `ω(X) = 0`.
pub fn dual_field(omega: &QForm) -> Result<[QSeries; 2]> {
    if omega.degree() != 1 || omega.nvars() != 2 {
        return Err(Error::Precondition("dual field needs a planar 1-form".into()));
    }
    Ok([omega.component(1), -omega.component(0)])
}

/// Inverse of [`dual_field`]: `X = P∂x + R∂y` gives `ω = −R dx + P dy`.
pub fn dual_form(field: &[QSeries]) -> Result<QForm> {
    if field.len() != 2 {
        return Err(Error::Precondition("dual form needs a planar field".into()));
    }
    QForm::one_form(vec![-field[1].clone(), field[0].clone()])
}

/// Dual form scaled by `−2`, so that the rotation `−y∂x + x∂y` maps to
/// `d(x²+y²)`.
pub fn center_form(field: &[QSeries]) -> Result<QForm> {
    Ok(dual_form(field)?.scale(&Rational::from_integer((-2).into())))
}

/// One step of the recursion `X(F) = 0`, `F = F_lead + Σ F_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieStage {
    /// Degree `k` of the unknown `F_k`.
    pub index: usize,
    /// Coordinates of the unresolved part of `X(F)` on the canonical
    /// complement of the image of `F_k ↦ X_lead(F_k)`; empty when solvable.
    pub normal_form: Vec<Rational>,
}

impl LieStage {
    /// First coordinate of the normal form, zero when the stage is solvable.
    pub fn value(&self) -> Rational {
        self.normal_form.first().cloned().unwrap_or_else(Rational::zero)
    }
}

enum Projection {
    /// Keep the normal form as the obstruction.
    Canonical,
    /// Absorb the obstruction into `V·(x²+y²)^{k/2}` and record `V`.
    Circle,
}

struct Recursion {
    stages: Vec<LieStage>,
    focal: Vec<(usize, Rational)>,
}

fn recurse(field: &[QSeries], lead: &QSeries, order: usize, projection: Projection) -> Result<Recursion> {
    check_order(order)?;
    let n = field.len();
    if n == 0 || field.iter().any(|c| c.nvars() != n) || lead.nvars() != n {
        return Err(Error::Structural("field components must live in n variables".into()));
    }
    let e = field
        .iter()
        .filter_map(QSeries::valuation)
        .min()
        .ok_or_else(|| Error::Precondition("zero vector field".into()))?;
    if e == 0 {
        return Err(Error::Precondition("field does not vanish at the origin".into()));
    }
    let qd = lead
        .homogeneous_degree()
        .ok_or_else(|| Error::Precondition("leading integral must be homogeneous".into()))?;
    if field.iter().any(|c| c.order() < order) {
        return Err(Error::Precondition("field known below the requested order".into()));
    }
    let top = order + qd - e;
    let work = top + e;
    let parts: Vec<Vec<QSeries>> = field
        .iter()
        .map(|c| (0..=order).map(|d| c.homogeneous_part(d).with_order(work)).collect())
        .collect();
    // ∂_i F_j for every known part F_j.
    let mut grads: Vec<(usize, Vec<QSeries>)> = vec![(
        qd,
        (0..n).map(|i| lead.with_order(work + 1).partial(i)).collect::<Result<_>>()?,
    )];
    let circle = match projection {
        Projection::Circle => {
            let x = QSeries::var(2, 0, work);
            let y = QSeries::var(2, 1, work);
            Some(&(&x * &x) + &(&y * &y))
        }
        Projection::Canonical => None,
    };
    let mut out = Recursion { stages: Vec::new(), focal: Vec::new() };

    for k in qd + 1..=top {
        let deg = k + e - 1;
        let mut s = QSeries::zero(n, work);
        for (j, grad) in &grads {
            let xdeg = deg + 1 - j;
            if xdeg > order {
                continue;
            }
            for i in 0..n {
                let xi = &parts[i][xdeg];
                if !xi.is_zero() && !grad[i].is_zero() {
                    s = s.try_add(&xi.try_mul(&grad[i])?)?;
                }
            }
        }
        let mut target = -s.homogeneous_part(deg);
        if let Some(r2) = &circle {
            let v = circle_average(&s, deg);
            if k % 2 == 0 {
                let mut rk = QSeries::one(2, work);
                for _ in 0..k / 2 {
                    rk = rk.try_mul(r2)?;
                }
                target = target.try_add(&rk.scale(&v))?;
                out.focal.push((k, v));
            }
        }

        let monomials = MultiIndex::all_of_degree(n, k as u32);
        let mut basis: ImageBasis<MultiIndex, Rational> = ImageBasis::new();
        for (idx, mu) in monomials.iter().enumerate() {
            let mut col: Vec<(MultiIndex, Rational)> = Vec::new();
            for (i, xi) in parts.iter().enumerate() {
                let Some(low) = mu.lower(i) else { continue };
                let c = Rational::from_integer(mu.get(i).into());
                for (m, a) in xi[e].bucket(e) {
                    col.push((m.mul(&low), a.clone() * &c));
                }
            }
            basis.push_column(idx, col);
        }
        let red = basis.reduce(target.bucket(deg).iter().cloned());
        if circle.is_some() && !red.is_consistent() {
            return Err(Error::Structural(format!("rotation stage {k} left a residual")));
        }
        out.stages.push(LieStage {
            index: k,
            normal_form: red.normal_form.into_iter().map(|(_, c)| c).collect(),
        });
        let fk = QSeries::from_terms(
            n,
            work + 1,
            red.solution.iter().map(|(&idx, c)| (monomials[idx], c.clone())),
        );
        if !fk.is_zero() {
            grads.push((k, (0..n).map(|i| fk.partial(i)).collect::<Result<_>>()?));
        }
    }
    Ok(out)
}

/// Solves `X(F) = 0` with `F = lead + …` degree by degree and reports each
/// stage, continuing past inconsistent ones with the canonical partial solution.
pub fn lie_obstructions(field: &[QSeries], lead: &QSeries, order: usize) -> Result<Vec<LieStage>> {
    Ok(recurse(field, lead, order, Projection::Canonical)?.stages)
}

/// Lyapunov recursion for a planar field with linear part `−y∂x + x∂y`:
/// builds `F = x²+y²+…` with `X(F) = Σ V_{2k}(x²+y²)^k` and returns
/// `V_4, V_6, …` through what order `N` determines.
pub fn solve_lie(field: &[QSeries], order: usize) -> Result<FocalValueSequence> {
    if field.len() != 2 {
        return Err(Error::Precondition("the Lyapunov recursion is planar".into()));
    }
    let x = QSeries::var(2, 0, order);
    let y = QSeries::var(2, 1, order);
    let rotation = field[0].bucket(1) == (-&y).bucket(1)
        && field[1].bucket(1) == x.bucket(1)
        && field.iter().all(|c| c.constant_term().is_zero());
    if !rotation {
        return Err(Error::Precondition("linear part must be −y∂x + x∂y".into()));
    }
    let r2 = &(&x * &x) + &(&y * &y);
    let rec = recurse(field, &r2, order, Projection::Circle)?;
    Ok(FocalValueSequence::new(FocalMethod::LyapunovRecursion, rec.focal))
}
