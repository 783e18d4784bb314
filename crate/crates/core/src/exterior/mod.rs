//! Differential forms of degree ≤ 3 with truncated-series coefficients.
//!
//! A [`KForm`] of degree `k` stores one coefficient per strictly increasing
//! index tuple `i₁ < … < i_k`. Every coefficient is truncated to the form's
//! order, so the usual identities (`d∘d = 0`, Leibniz, graded antisymmetry)
//! hold exactly on what is stored.

mod divide;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;


use crate::algebra::{Composition, MultiIndex, Rational, Scalar, Series};
use crate::error::{Error, Result};

pub use divide::lex_remainder;

/// Highest form degree supported.
pub const MAX_FORM_DEGREE: usize = 3;

/// Strictly increasing tuple of variable indices.
pub type Basis = Vec<usize>;

#[derive(Clone, Debug, PartialEq)]
pub struct KForm<K: Scalar = Rational> {
    degree: usize,
    nvars: usize,
    order: usize,
    coeffs: BTreeMap<Basis, Series<K>>,
}

pub type QForm = KForm<Rational>;

/// Homogeneous pieces `ω = Σ_{m ≥ ν} ω_m`, where `m` is the coefficient degree.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousDecomposition<K: Scalar = Rational> {
    pub parts: Vec<(usize, KForm<K>)>,
    /// `None` for the zero form; callers must branch on it.
    pub leading: Option<usize>,
}

impl<K: Scalar> HomogeneousDecomposition<K> {
    pub fn leading_part(&self) -> Option<&KForm<K>> {
        self.parts.first().map(|(_, f)| f)
    }

    pub fn part(&self, m: usize) -> Option<&KForm<K>> {
        self.parts.iter().find(|(d, _)| *d == m).map(|(_, f)| f)
    }
}

/// Sign of sorting `idx` and the sorted tuple; `None` on a repeated index.
fn sort_sign(idx: &[usize]) -> Option<(i64, Basis)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            match v[j].cmp(&v[j + 1]) {
                std::cmp::Ordering::Greater => {
                    v.swap(j, j + 1);
                    sign = -sign;
                }
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

impl<K: Scalar> KForm<K> {
    pub fn zero(degree: usize, nvars: usize, order: usize) -> Self {
        Self {
            degree,
            nvars,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    /// The 0-form `f`.
    pub fn function(f: Series<K>) -> Self {
        let mut w = Self::zero(0, f.nvars(), f.order());
        w.insert(Vec::new(), f);
        w
    }

    /// `Σ components[i] dx_i`. The order is the smallest component order.
    pub fn one_form(components: Vec<Series<K>>) -> Result<Self> {
        let nvars = components.len();
        if components.iter().any(|c| c.nvars() != nvars) {
            return Err(Error::Structural("one-form components must live in n variables".into()));
        }
        let order = components.iter().map(Series::order).min().unwrap_or(0);
        let mut w = Self::zero(1, nvars, order);
        for (i, c) in components.into_iter().enumerate() {
            w.insert(vec![i], c);
        }
        Ok(w)
    }

    /// `coeff · dx_{idx₁} ∧ … ∧ dx_{idx_k}` for an arbitrary index list.
    pub fn basis_form(nvars: usize, idx: &[usize], coeff: Series<K>) -> Result<Self> {
        if idx.len() > MAX_FORM_DEGREE {
            return Err(Error::UnsupportedDegree(idx.len()));
        }
        if let Some(&i) = idx.iter().find(|&&i| i >= nvars) {
            return Err(Error::IndexOutOfRange { index: i, nvars });
        }
        if coeff.nvars() != nvars {
            return Err(Error::Structural("coefficient dimension".into()));
        }
        let mut w = Self::zero(idx.len(), nvars, coeff.order());
        if let Some((sign, basis)) = sort_sign(idx) {
            let c = if sign < 0 { -coeff } else { coeff };
            w.insert(basis, c);
        }
        Ok(w)
    }

    /// The covector `dx_i`.
    pub fn dx(nvars: usize, i: usize, order: usize) -> Self {
        Self::basis_form(nvars, &[i], Series::one(nvars, order)).expect("valid index")
    }

    fn insert(&mut self, basis: Basis, c: Series<K>) {
        let c = c.truncated(self.order);
        if !c.is_zero() {
            self.coeffs.insert(basis, c);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of nonzero monomial coefficients over all basis elements.
    pub fn num_terms(&self) -> usize {
        self.coeffs.values().map(Series::num_terms).sum()
    }

    pub fn coeff(&self, basis: &[usize]) -> Series<K> {
        self.coeffs
            .get(basis)
            .cloned()
            .unwrap_or_else(|| Series::zero(self.nvars, self.order))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Basis, &Series<K>)> {
        self.coeffs.iter()
    }

    /// Component `a_i` of a 1-form `Σ a_i dx_i`.
    pub fn component(&self, i: usize) -> Series<K> {
        debug_assert_eq!(self.degree, 1);
        self.coeff(&[i])
    }

    /// All components of a 1-form.
    pub fn components(&self) -> Vec<Series<K>> {
        (0..self.nvars).map(|i| self.component(i)).collect()
    }

    /// The 0-form's function.
    pub fn as_function(&self) -> Series<K> {
        debug_assert_eq!(self.degree, 0);
        self.coeff(&[])
    }

    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut w = Self::zero(self.degree, self.nvars, order);
        for (b, c) in &self.coeffs {
            w.insert(b.clone(), c.truncated(order));
        }
        w
    }

    /// Raises or lowers the declared order; raising treats coefficients as exact polynomials.
    pub fn with_order(&self, order: usize) -> Self {
        let mut w = Self::zero(self.degree, self.nvars, order);
        for (b, c) in &self.coeffs {
            w.insert(b.clone(), c.with_order(order));
        }
        w
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Structural(format!(
                "forms over {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        if self.degree != other.degree {
            return Err(Error::Structural(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let order = self.order.min(other.order);
        let mut w = Self::zero(self.degree, self.nvars, order);
        let keys: std::collections::BTreeSet<&Basis> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        for b in keys {
            let c = match (self.coeffs.get(b), other.coeffs.get(b)) {
                (Some(x), Some(y)) => x.try_add(y)?,
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            };
            w.insert(b.clone(), c);
        }
        Ok(w)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_series(|c| -c)
    }

    pub fn scale(&self, k: &K) -> Self {
        self.map_series(|c| c.scale(k))
    }

    /// `f · ω` for a function `f`.
    pub fn mul_function(&self, f: &Series<K>) -> Result<Self> {
        if f.nvars() != self.nvars {
            return Err(Error::Structural("function and form dimensions differ".into()));
        }
        let order = self.order.min(f.order());
        let mut w = Self::zero(self.degree, self.nvars, order);
        for (b, c) in &self.coeffs {
            w.insert(b.clone(), c.try_mul(f)?);
        }
        Ok(w)
    }

    fn map_series(&self, f: impl Fn(&Series<K>) -> Series<K>) -> Self {
        let mut w = Self::zero(self.degree, self.nvars, self.order);
        for (b, c) in &self.coeffs {
            w.insert(b.clone(), f(c));
        }
        w
    }

    /// Changes the coefficient field, e.g. complexification.
    pub fn map_coeffs<L: Scalar>(&self, f: impl Fn(&K) -> L + Copy) -> KForm<L> {
        let mut w = KForm::<L>::zero(self.degree, self.nvars, self.order);
        for (b, c) in &self.coeffs {
            w.insert(b.clone(), c.map_coeffs(f));
        }
        w
    }

    /// `a ∧ b`, with the sign of the sorting permutation.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::Structural("wedge of forms over different dimensions".into()));
        }
        let degree = self.degree + other.degree;
        if degree > MAX_FORM_DEGREE {
            return Err(Error::UnsupportedDegree(degree));
        }
        let order = self.order.min(other.order);
        let mut acc: BTreeMap<Basis, Series<K>> = BTreeMap::new();
        for (ba, ca) in &self.coeffs {
            for (bb, cb) in &other.coeffs {
                let idx: Vec<usize> = ba.iter().chain(bb.iter()).copied().collect();
                let Some((sign, basis)) = sort_sign(&idx) else {
                    continue;
                };
                let mut p = ca.try_mul(cb)?;
                if sign < 0 {
                    p = -p;
                }
                let entry = acc.entry(basis).or_insert_with(|| Series::zero(self.nvars, order));
                *entry = entry.try_add(&p)?;
            }
        }
        let mut w = Self::zero(degree, self.nvars, order);
        for (b, c) in acc {
            w.insert(b, c);
        }
        Ok(w)
    }

    /// Exterior derivative; the coefficient order drops by one.
    pub fn d(&self) -> Result<Self> {
        if self.degree >= MAX_FORM_DEGREE {
            return Err(Error::UnsupportedDegree(self.degree + 1));
        }
        let order = self.order.saturating_sub(1);
        let mut acc: BTreeMap<Basis, Series<K>> = BTreeMap::new();
        for (b, c) in &self.coeffs {
            for j in 0..self.nvars {
                if b.contains(&j) {
                    continue;
                }
                let dc = c.partial(j)?;
                if dc.is_zero() {
                    continue;
                }
                let mut idx = vec![j];
                idx.extend_from_slice(b);
                let (sign, basis) = sort_sign(&idx).expect("distinct indices");
                let term = if sign < 0 { -dc } else { dc };
                let entry = acc.entry(basis).or_insert_with(|| Series::zero(self.nvars, order));
                *entry = entry.try_add(&term)?;
            }
        }
        let mut w = Self::zero(self.degree + 1, self.nvars, order);
        for (b, c) in acc {
            w.insert(b, c);
        }
        Ok(w)
    }

    /// Interior product with the Euler field `R = Σ x_j ∂/∂x_j`.
    ///
    /// Coefficients gain one degree, so the order rises by one.
    pub fn euler_contract(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::UnsupportedDegree(0));
        }
        let order = self.order + 1;
        let mut acc: BTreeMap<Basis, Series<K>> = BTreeMap::new();
        for (b, c) in &self.coeffs {
            for (s, &i) in b.iter().enumerate() {
                let sign = if s % 2 == 0 { K::one() } else { -K::one() };
                let term = c.mul_monomial(&MultiIndex::var(i), &sign);
                let mut rest = b.clone();
                rest.remove(s);
                let entry = acc.entry(rest).or_insert_with(|| Series::zero(self.nvars, order));
                *entry = entry.try_add(&term)?;
            }
        }
        let mut w = Self::zero(self.degree - 1, self.nvars, order);
        for (b, c) in acc {
            w.insert(b, c);
        }
        Ok(w)
    }

    /// The part whose coefficients are homogeneous of degree `m`.
    pub fn homogeneous_part(&self, m: usize) -> Self {
        self.map_series(|c| c.homogeneous_part(m))
    }

    /// Lowest coefficient degree present; `None` for the zero form.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.values().filter_map(Series::valuation).min()
    }

    pub fn homogeneous_parts(&self) -> HomogeneousDecomposition<K> {
        let top = self.coeffs.values().filter_map(Series::degree).max();
        let mut parts = Vec::new();
        if let (Some(lo), Some(hi)) = (self.valuation(), top) {
            for m in lo..=hi {
                let p = self.homogeneous_part(m);
                if !p.is_zero() {
                    parts.push((m, p));
                }
            }
        }
        HomogeneousDecomposition {
            leading: parts.first().map(|(m, _)| *m),
            parts,
        }
    }

    /// `ω ∧ dω` for a 1-form; zero iff ω is integrable (through the truncation).
    pub fn integrability_residual(&self) -> Result<Self> {
        if self.degree != 1 {
            return Err(Error::UnsupportedDegree(self.degree));
        }
        if self.nvars < 3 {
            return Ok(Self::zero(3, self.nvars, self.order.saturating_sub(1)));
        }
        self.wedge(&self.d()?)
    }

    /// Coefficient-wise remainder modulo `p` under pure lex order; zero iff `p`
    /// divides every coefficient.
    pub fn divisibility_residual(&self, p: &Series<K>) -> Result<Self> {
        if p.homogeneous_degree().is_none() {
            return Err(Error::Precondition("divisor must be homogeneous and nonzero".into()));
        }
        let mut w = Self::zero(self.degree, self.nvars, self.order);
        for (b, c) in &self.coeffs {
            w.insert(b.clone(), lex_remainder(c, p));
        }
        Ok(w)
    }

    /// Pullback under the map `x_i ↦ images[i]` (images in the target variables).
    pub fn pullback(&self, images: &[Series<K>], mode: Composition) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::Structural("one image per variable required".into()));
        }
        let target = images.first().map_or(self.nvars, Series::nvars);
        let differentials: Vec<KForm<K>> = images
            .iter()
            .map(|img| KForm::function(img.clone()).d())
            .collect::<Result<_>>()?;
        let mut out: Option<Self> = None;
        for (b, c) in &self.coeffs {
            let mut term = KForm::function(c.substitute(images, mode)?);
            for &i in b {
                term = term.wedge(&differentials[i])?;
            }
            out = Some(match out {
                Some(acc) => acc.try_add(&term)?,
                None => term,
            });
        }
        let out = out.unwrap_or_else(|| {
            let order = images.iter().map(Series::order).min().unwrap_or(self.order);
            KForm::zero(self.degree, target, order.min(self.order))
        });
        Ok(out)
    }

    /// Values of a 1-form's components at a point.
    pub fn evaluate_components(&self, point: &[Complex64]) -> Result<Vec<Complex64>> {
        (0..self.nvars).map(|i| self.component(i).evaluate(point)).collect()
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|(b, c)| {
                let cov: Vec<String> = b.iter().map(|&i| format!("d{}", names[i])).collect();
                if cov.is_empty() {
                    c.fmt_with(names)
                } else {
                    format!("({})*{}", c.fmt_with(names), cov.join("^"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<K: Scalar> fmt::Display for KForm<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&crate::algebra::series::default_names(self.nvars)))
    }
}

impl KForm<Rational> {
    pub fn complexify(&self) -> KForm<crate::algebra::GaussianRational> {
        self.map_coeffs(|c| crate::algebra::GaussianRational::real(c.clone()))
    }
}

/// `d f` for a function.
pub fn exterior_derivative_of<K: Scalar>(f: &Series<K>) -> KForm<K> {
    KForm::function(f.clone()).d().expect("degree 0")
}

#[cfg(test)]
mod tests;
