use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use super::cone::rational_roots;
use super::{blowup, BlowupChart};
use crate::algebra::{rational_to_f64, Rational};
use crate::error::{Error, Result};
use crate::exterior::QForm;

/// A singular point `(z, t) = (0, t₀)` of a strict transform on the divisor.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorSingularity {
    pub chart: usize,
    pub t: Complex64,
    /// Set when `t₀` is rational and was found exactly.
    pub exact: Option<Rational>,
    /// Linear part of the dual field `B∂z − A∂t` in `(z, t)` order.
    pub linear_part: [[Complex64; 2]; 2],
    /// `[λ_transverse, λ_divisor]`.
    pub eigenvalues: [Complex64; 2],
    /// `λ_divisor / λ_transverse`; `None` when the transverse eigenvalue is 0.
    pub ratio: Option<Complex64>,
    /// Ratio real and negative.
    pub siegel: bool,
}

fn horner(coeffs: &[Complex64], t: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * t + c)
}

fn deflate(coeffs: &[Rational], root: &Rational) -> Vec<Rational> {
    // Synthetic division by (t − root); the remainder is zero by construction.
    let d = coeffs.len() - 1;
    let mut out = vec![Rational::zero(); d];
    let mut carry = Rational::zero();
    for k in (1..=d).rev() {
        carry = carry * root + &coeffs[k];
        out[k - 1] = carry.clone();
    }
    out
}

fn numeric_roots(coeffs: &[Rational]) -> Vec<Complex64> {
    let c: Vec<f64> = coeffs.iter().map(rational_to_f64).collect();
    let d = c.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = c[d];
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    m.complex_eigenvalues().iter().cloned().collect()
}

fn newton(coeffs: &[Complex64], mut t: Complex64) -> Complex64 {
    let deriv: Vec<Complex64> = coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    for _ in 0..60 {
        let f = horner(coeffs, t);
        let df = horner(&deriv, t);
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        t -= step;
        if step.norm() <= 1e-12 * t.norm().max(1.0) {
            break;
        }
    }
    t
}

/// Zeros of the strict transform on the divisor `z = 0` (planar charts only).
///
/// Rational roots are found exactly; the rest come from companion-matrix
/// eigenvalues refined by Newton steps.
pub fn divisor_singularities(chart: &BlowupChart) -> Result<Vec<DivisorSingularity>> {
    let w = &chart.strict_transform;
    if w.nvars() != 2 {
        return Err(Error::Precondition("divisor singularities need a planar chart".into()));
    }
    if chart.dicritical {
        return Err(Error::Precondition("dicritical chart: the divisor is not invariant".into()));
    }
    let (j, o) = (chart.chart, 1 - chart.chart);
    let a = w.component(j);
    let b = w.component(o);
    let on_divisor = |s: &crate::algebra::QSeries| -> Vec<Rational> {
        let mut c = vec![Rational::zero(); s.order() + 1];
        for (m, v) in s.terms() {
            if m.get(j) == 0 {
                c[m.get(o) as usize] = v.clone();
            }
        }
        while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        c
    };
    if on_divisor(&b).iter().any(|c| !c.is_zero()) {
        return Err(Error::Precondition("divisor is not invariant in this chart".into()));
    }
    let mut poly = on_divisor(&a);
    if poly.iter().all(Zero::is_zero) {
        return Err(Error::Precondition("strict transform vanishes on the divisor".into()));
    }

    let mut found: Vec<(Complex64, Option<Rational>)> = Vec::new();
    for r in rational_roots(&poly).unwrap_or_default() {
        found.push((Complex64::new(rational_to_f64(&r), 0.0), Some(r.clone())));
        while poly.len() > 1 && poly.iter().rev().fold(Rational::zero(), |acc, c| acc * &r + c).is_zero() {
            poly = deflate(&poly, &r);
        }
    }
    let full: Vec<Complex64> = on_divisor(&a).iter().map(|c| Complex64::new(rational_to_f64(c), 0.0)).collect();
    let mut numeric: Vec<Complex64> = Vec::new();
    for t in numeric_roots(&poly) {
        let t = newton(&full, t);
        if !numeric.iter().any(|s| (s - t).norm() < 1e-9) {
            numeric.push(t);
        }
    }
    found.extend(numeric.into_iter().map(|t| (t, None)));

    let partial = |s: &crate::algebra::QSeries, v: usize, t: Complex64| -> Result<Complex64> {
        let mut p = [Complex64::zero(); 2];
        p[o] = t;
        s.partial(v)?.evaluate(&p)
    };
    let mut out = Vec::new();
    for (t, exact) in found {
        let lin = [
            [partial(&b, j, t)?, partial(&b, o, t)?],
            [-partial(&a, j, t)?, -partial(&a, o, t)?],
        ];
        let transverse = lin[0][0];
        let along = lin[1][1];
        let ratio = (transverse.norm() > 1e-14).then(|| along / transverse);
        let siegel = ratio.is_some_and(|r| r.im.abs() <= 1e-9 * r.norm().max(1.0) && r.re < 0.0);
        out.push(DivisorSingularity {
            chart: j,
            t,
            exact,
            linear_part: lin,
            eigenvalues: [transverse, along],
            ratio,
            siegel,
        });
    }
    Ok(out)
}

/// Largest mismatch between the two planar strict transforms over the
/// overlap `t = 1/u`, `x = u·y`, at the given chart-1 points `(u, y)`.
///
/// With `k` the divisor power, the transition pulls the first transform back
/// to `u^{−k}` times the second. The coefficients of `ω` are read as
/// polynomials, so both charts are computed without truncation loss.
pub fn chart_transition_defect(omega: &QForm, points: &[(Complex64, Complex64)]) -> Result<f64> {
    if omega.nvars() != 2 {
        return Err(Error::Precondition("chart comparison is planar".into()));
    }
    let omega = &omega.with_order(2 * omega.order() + 2);
    let c0 = blowup(omega, 0)?;
    let c1 = blowup(omega, 1)?;
    if c0.divisor_power != c1.divisor_power {
        return Err(Error::Structural("charts divide out different powers".into()));
    }
    let k = c0.divisor_power as i32;
    let (a1, b1) = (c0.strict_transform.component(0), c0.strict_transform.component(1));
    let (c, d) = (c1.strict_transform.component(0), c1.strict_transform.component(1));
    let mut worst: f64 = 0.0;
    for &(u, y) in points {
        if u.norm() < 1e-12 {
            return Err(Error::Precondition("overlap points need u ≠ 0".into()));
        }
        let p0 = [u * y, u.inv()];
        let (a, b) = (a1.evaluate(&p0)?, b1.evaluate(&p0)?);
        let du = a * y - b / (u * u);
        let dy = a * u;
        let scale = u.powi(-k);
        let p1 = [u, y];
        worst = worst
            .max((du - c.evaluate(&p1)? * scale).norm())
            .max((dy - d.evaluate(&p1)? * scale).norm());
    }
    Ok(worst)
}
