use num_traits::Zero;

use crate::algebra::linsolve::{rank, ImageBasis};
use crate::algebra::{check_order, Composition, MultiIndex, QSeries, Rational};
use crate::error::{Error, Result};

/// A formal diffeomorphism `x ↦ φ(x)` with its inverse, both through order `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateChange {
    pub images: Vec<QSeries>,
    pub inverse_images: Vec<QSeries>,
    pub order: usize,
}

impl CoordinateChange {
    pub fn identity(nvars: usize, order: usize) -> Self {
        let images: Vec<QSeries> = (0..nvars).map(|i| QSeries::var(nvars, i, order)).collect();
        Self { inverse_images: images.clone(), images, order }
    }

    /// `s ∘ φ`.
    pub fn apply(&self, s: &QSeries) -> Result<QSeries> {
        s.substitute(&self.images, Composition::Strict)
    }

    /// `s ∘ φ⁻¹`.
    pub fn apply_inverse(&self, s: &QSeries) -> Result<QSeries> {
        s.substitute(&self.inverse_images, Composition::Strict)
    }

    /// Both compositions `φ∘φ⁻¹` and `φ⁻¹∘φ` equal the identity through `N`.
    pub fn is_inverse_pair(&self) -> Result<bool> {
        let n = self.images.len();
        for (a, b) in [(&self.images, &self.inverse_images), (&self.inverse_images, &self.images)] {
            for (i, img) in a.iter().enumerate() {
                let composed = img.substitute(b, Composition::Strict)?;
                if !composed.agrees_through(&QSeries::var(n, i, self.order), self.order) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Hessian of `f` at the origin, read off the quadratic coefficients.
fn hessian(f: &QSeries) -> Vec<Vec<Rational>> {
    let n = f.nvars();
    let mut h = vec![vec![Rational::zero(); n]; n];
    for (m, c) in f.bucket(2) {
        let idx: Vec<usize> = (0..n).filter(|&i| m.get(i) > 0).collect();
        match idx.as_slice() {
            [i] => h[*i][*i] = c.clone() * Rational::from_integer(2.into()),
            [i, j] => {
                h[*i][*j] = c.clone();
                h[*j][*i] = c.clone();
            }
            _ => unreachable!("quadratic monomial"),
        }
    }
    h
}

/// Formal Morse lemma: finds `φ = id + h.o.t.` with `f∘φ = Q` through order
/// `N`, where `Q` is the quadratic part of `f`.
///
/// Stage `d` solves `Σ_i ∂_iQ·ψ_i = −(f∘φ)_d` for homogeneous `ψ_i` of degree
/// `d − 1`; free unknowns are set to zero.
pub fn morse_normalize(f: &QSeries, order: usize) -> Result<CoordinateChange> {
    check_order(order)?;
    let n = f.nvars();
    if f.order() < order {
        return Err(Error::Precondition("f is known below the requested order".into()));
    }
    if !f.constant_term().is_zero() || !f.bucket(1).is_empty() {
        return Err(Error::Precondition("f must vanish to second order at the origin".into()));
    }
    let r = rank(&hessian(f));
    if r < n {
        return Err(Error::RankDeficient { rank: r, nvars: n });
    }
    let f = f.truncated(order);
    let q = f.homogeneous_part(2);
    let grad: Vec<QSeries> = (0..n).map(|i| q.partial(i)).collect::<Result<_>>()?;
    let mut images: Vec<QSeries> = (0..n).map(|i| QSeries::var(n, i, order)).collect();

    for d in 3..=order {
        let composed = f.substitute(&images, Composition::Strict)?;
        let rd = composed.bucket(d);
        if rd.is_empty() {
            continue;
        }
        let monomials = MultiIndex::all_of_degree(n, (d - 1) as u32);
        let mut basis: ImageBasis<MultiIndex, Rational> = ImageBasis::new();
        for i in 0..n {
            for (k, mu) in monomials.iter().enumerate() {
                let col = grad[i].mul_monomial(mu, &Rational::from_integer(1.into()));
                basis.push_column(i * monomials.len() + k, col.bucket(d).to_vec());
            }
        }
        let red = basis.reduce(rd.iter().map(|(m, c)| (*m, -c.clone())));
        if !red.is_consistent() {
            return Err(Error::Structural(format!("Morse stage {d} is inconsistent")));
        }
        for (idx, c) in red.solution {
            let (i, k) = (idx / monomials.len(), idx % monomials.len());
            let term = QSeries::monomial(n, order, monomials[k], c);
            images[i] = images[i].try_add(&term)?;
        }
    }

    // φ = id + H, so φ⁻¹ = id − H∘φ⁻¹; each pass fixes one more degree.
    let higher: Vec<QSeries> = images
        .iter()
        .enumerate()
        .map(|(i, img)| img.try_sub(&QSeries::var(n, i, order)))
        .collect::<Result<_>>()?;
    let mut inverse: Vec<QSeries> = (0..n).map(|i| QSeries::var(n, i, order)).collect();
    for _ in 1..order {
        inverse = higher
            .iter()
            .enumerate()
            .map(|(i, h)| QSeries::var(n, i, order).try_sub(&h.substitute(&inverse, Composition::Strict)?))
            .collect::<Result<_>>()?;
    }
    Ok(CoordinateChange { images, inverse_images: inverse, order })
}
