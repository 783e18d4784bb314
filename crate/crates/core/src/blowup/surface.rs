use nalgebra::{Matrix4, RowVector4};
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{Composition, GaussianRational, QSeries, Rational, Series};
use crate::error::{Error, Result};
use crate::exterior::KForm;

pub type GSeries = Series<GaussianRational>;

/// Real and imaginary parts of `s(z)` as series in the real coordinates
/// `(Re z₁, Im z₁, Re z₂, Im z₂, …)`.
pub fn realify(s: &GSeries) -> Result<(QSeries, QSeries)> {
    let n = s.nvars();
    let order = s.order();
    let images: Vec<GSeries> = (0..n)
        .map(|k| {
            let re = GSeries::var(2 * n, 2 * k, order);
            let im = GSeries::var(2 * n, 2 * k + 1, order).scale(&GaussianRational::i());
            &re + &im
        })
        .collect();
    let sub = s.substitute(&images, Composition::Strict)?;
    Ok((sub.map_coeffs(|c| c.re.clone()), sub.map_coeffs(|c| c.im.clone())))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TotallyRealSurfaceData {
    pub f: GSeries,
    pub g: GSeries,
    /// `(f + g)/2`.
    pub x: GSeries,
    /// `(f − g)/(2i)`.
    pub y: GSeries,
    /// `Re f − Re g` and `Im f + Im g` in the real coordinates.
    pub real_equations: [QSeries; 2],
    /// `f·g = X² + Y²` held coefficient by coefficient.
    pub identity_holds: bool,
}

/// Builds `V = {Re f = Re g, Im f = −Im g}` (that is `f = ḡ`) for a planar
/// pair meeting transversely at the origin.
pub fn totally_real_surface(f: &GSeries, g: &GSeries) -> Result<TotallyRealSurfaceData> {
    if f.nvars() != 2 || g.nvars() != 2 {
        return Err(Error::Precondition("totally real construction is planar".into()));
    }
    if !f.constant_term().is_zero() || !g.constant_term().is_zero() {
        return Err(Error::Precondition("f and g must vanish at the origin".into()));
    }
    let lin = |s: &GSeries, i: usize| s.coeff(&crate::algebra::MultiIndex::var(i));
    let det = lin(f, 0) * &lin(g, 1) - &(lin(f, 1) * &lin(g, 0));
    if det.is_zero() {
        return Err(Error::GeneralPosition);
    }
    let half = GaussianRational::real(Rational::new(1.into(), 2.into()));
    let x = f.try_add(g)?.scale(&half);
    // 1/(2i) = −i/2.
    let inv_2i = GaussianRational::new(Rational::zero(), Rational::new((-1).into(), 2.into()));
    let y = f.try_sub(g)?.scale(&inv_2i);
    let fg = f.try_mul(g)?;
    let sum = x.try_mul(&x)?.try_add(&y.try_mul(&y)?)?;
    let identity_holds = fg == sum;
    let (fr, fi) = realify(f)?;
    let (gr, gi) = realify(g)?;
    Ok(TotallyRealSurfaceData {
        f: f.clone(),
        g: g.clone(),
        x,
        y,
        real_equations: [fr.try_sub(&gr)?, fi.try_add(&gi)?],
        identity_holds,
    })
}

/// A real surface in `C²` cut out by two real equations in
/// `(Re z₁, Im z₁, Re z₂, Im z₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSurface {
    pub equations: [QSeries; 2],
}

impl RealSurface {
    /// `Im z₁ = Im z₂ = 0`.
    pub fn real_slice(order: usize) -> Self {
        Self { equations: [QSeries::var(4, 1, order), QSeries::var(4, 3, order)] }
    }

    /// The complex curve `h = 0` seen as a real surface.
    pub fn complex_curve(h: &GSeries) -> Result<Self> {
        let (re, im) = realify(h)?;
        Ok(Self { equations: [re, im] })
    }
}

impl From<&TotallyRealSurfaceData> for RealSurface {
    fn from(d: &TotallyRealSurfaceData) -> Self {
        Self { equations: d.real_equations.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContactClass {
    Transverse,
    TotallyRealContactOne,
    Invariant,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContactReport {
    pub point: [(f64, f64); 2],
    /// `dim_R (T_pV ∩ T_pF)`.
    pub dimension: usize,
    pub classification: ContactClass,
}

/// `dim(T_pV ∩ ker ω_p)` from the 4×4 real system: two rows from the
/// surface gradients, two from the real and imaginary parts of `ω_p(v) = 0`.
pub fn contact_order(omega: &KForm<GaussianRational>, surface: &RealSurface, p: [Complex64; 2]) -> Result<ContactReport> {
    if omega.nvars() != 2 || omega.degree() != 1 {
        return Err(Error::Precondition("contact order needs a planar 1-form".into()));
    }
    let real = [Complex64::new(p[0].re, 0.0), Complex64::new(p[0].im, 0.0), Complex64::new(p[1].re, 0.0), Complex64::new(p[1].im, 0.0)];
    for e in &surface.equations {
        if e.evaluate(&real)?.norm() > 1e-10 {
            return Err(Error::Precondition("point is not on the surface".into()));
        }
    }
    let w = omega.evaluate_components(&p)?;
    if w.iter().all(|c| c.norm() < 1e-14) {
        return Err(Error::Precondition("ω vanishes at the point".into()));
    }
    let mut m = Matrix4::<f64>::zeros();
    for (row, e) in surface.equations.iter().enumerate() {
        let grad: Vec<f64> = (0..4).map(|v| e.partial(v).and_then(|d| d.evaluate(&real)).map(|z| z.re)).collect::<Result<_>>()?;
        m.set_row(row, &RowVector4::new(grad[0], grad[1], grad[2], grad[3]));
    }
    // ω(v) with v_k = ξ_k + iη_k: a·v₁ + b·v₂.
    let (a, b) = (w[0], w[1]);
    m.set_row(2, &RowVector4::new(a.re, -a.im, b.re, -b.im));
    m.set_row(3, &RowVector4::new(a.im, a.re, b.im, b.re));
    let sv = m.singular_values();
    let top = sv.max();
    let rank = sv.iter().filter(|&&s| s > 1e-9 * top.max(1.0)).count();
    let dimension = 4 - rank;
    let classification = match dimension {
        0 => ContactClass::Transverse,
        1 => ContactClass::TotallyRealContactOne,
        _ => ContactClass::Invariant,
    };
    Ok(ContactReport { point: [(p[0].re, p[0].im), (p[1].re, p[1].im)], dimension, classification })
}
