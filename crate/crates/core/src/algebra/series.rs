//! Graded truncated multivariate power series with exact coefficients.
//!
//! A [`Series`] of order `N` stores every coefficient of total degree `≤ N`,
//! bucketed by degree. Terms above `N` are unknown, not zero. Binary
//! operations combine only series over the same number of variables; the
//! coefficient field is fixed by the type parameter.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;


use super::monomial::{MultiIndex, MAX_VARS};
use super::scalar::{FieldTag, Rational, Scalar};
use crate::error::{Error, Result};

/// Default truncation order of symbolic computations.
pub const DEFAULT_ORDER: usize = 10;
/// Hard cap on truncation orders accepted at API boundaries.
pub const MAX_ORDER: usize = 24;

pub fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        Err(Error::OrderTooLarge { order, cap: MAX_ORDER })
    } else {
        Ok(())
    }
}

/// How [`Series::substitute`] treats images with a constant term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Composition {
    /// Images must vanish at the origin; the result is exact through the input order.
    #[default]
    Strict,
    /// The series is an exact polynomial, so images may carry constant terms.
    /// The result is exact through the smallest image order.
    Polynomial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series<K: Scalar = Rational> {
    nvars: usize,
    order: usize,
    /// `buckets[m]` holds the degree-`m` terms, nonzero, sorted descending in lex order.
    buckets: Vec<Vec<(MultiIndex, K)>>,
}

pub type QSeries = Series<Rational>;

impl<K: Scalar> Series<K> {
    pub fn zero(nvars: usize, order: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&nvars), "nvars must be in 1..={MAX_VARS}");
        Self {
            nvars,
            order,
            buckets: vec![Vec::new(); order + 1],
        }
    }

    pub fn constant(nvars: usize, order: usize, c: K) -> Self {
        Self::monomial(nvars, order, MultiIndex::zero(), c)
    }

    pub fn one(nvars: usize, order: usize) -> Self {
        Self::constant(nvars, order, K::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, i: usize, order: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Self::monomial(nvars, order, MultiIndex::var(i), K::one())
    }

    pub fn monomial(nvars: usize, order: usize, m: MultiIndex, c: K) -> Self {
        Self::from_terms(nvars, order, [(m, c)])
    }

    /// Sums duplicate monomials, drops zeros and terms above `order`.
    pub fn from_terms(nvars: usize, order: usize, terms: impl IntoIterator<Item = (MultiIndex, K)>) -> Self {
        let mut acc: Vec<HashMap<MultiIndex, K>> = vec![HashMap::new(); order + 1];
        for (m, c) in terms {
            debug_assert!(m.exponents(MAX_VARS)[nvars..].iter().all(|&e| e == 0));
            let d = m.degree() as usize;
            if d > order || c.is_zero() {
                continue;
            }
            match acc[d].get_mut(&m) {
                Some(v) => *v += &c,
                None => {
                    acc[d].insert(m, c);
                }
            }
        }
        let mut s = Self::zero(nvars, order);
        for (d, map) in acc.into_iter().enumerate() {
            s.buckets[d] = sorted_bucket(map);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn field(&self) -> FieldTag {
        K::FIELD
    }

    pub fn is_zero(&self) -> bool {
        self.buckets.iter().all(Vec::is_empty)
    }

    pub fn num_terms(&self) -> usize {
        self.buckets.iter().map(Vec::len).sum()
    }

    /// Terms by ascending degree; within a degree, descending lex order.
    pub fn terms(&self) -> impl Iterator<Item = &(MultiIndex, K)> + '_ {
        self.buckets.iter().flatten()
    }

    pub fn bucket(&self, degree: usize) -> &[(MultiIndex, K)] {
        self.buckets.get(degree).map_or(&[], Vec::as_slice)
    }

    pub fn coeff(&self, m: &MultiIndex) -> K {
        let d = m.degree() as usize;
        self.bucket(d)
            .binary_search_by(|(k, _)| m.cmp(k))
            .map(|i| self.buckets[d][i].1.clone())
            .unwrap_or_else(|_| K::zero())
    }

    pub fn constant_term(&self) -> K {
        self.coeff(&MultiIndex::zero())
    }

    /// Lowest degree with a nonzero term.
    pub fn valuation(&self) -> Option<usize> {
        self.buckets.iter().position(|b| !b.is_empty())
    }

    /// Highest degree with a nonzero term.
    pub fn degree(&self) -> Option<usize> {
        self.buckets.iter().rposition(|b| !b.is_empty())
    }

    /// The degree if every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let v = self.valuation()?;
        (self.degree() == Some(v)).then_some(v)
    }

    pub fn homogeneous_part(&self, degree: usize) -> Self {
        let mut s = Self::zero(self.nvars, self.order);
        if degree <= self.order {
            s.buckets[degree] = self.buckets[degree].clone();
        }
        s
    }

    /// Drops everything above `order` (never raises the order).
    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self {
            nvars: self.nvars,
            order,
            buckets: self.buckets[..=order].to_vec(),
        }
    }

    /// Changes the declared order. Raising it asserts the series is an exact
    /// polynomial whose unknown tail is zero.
    pub fn with_order(&self, order: usize) -> Self {
        if order <= self.order {
            return self.truncated(order);
        }
        let mut s = self.clone();
        s.order = order;
        s.buckets.resize(order + 1, Vec::new());
        s
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Structural(format!(
                "series over {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let order = self.order.min(other.order);
        let mut s = Self::zero(self.nvars, order);
        for d in 0..=order {
            s.buckets[d] = merge(&self.buckets[d], &other.buckets[d], |a, b| a + b);
        }
        Ok(s)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let order = self.order.min(other.order);
        let mut s = Self::zero(self.nvars, order);
        for m in 0..=order {
            let mut acc: HashMap<MultiIndex, K> = HashMap::new();
            for i in 0..=m {
                let (a, b) = (self.bucket(i), other.bucket(m - i));
                if a.is_empty() || b.is_empty() {
                    continue;
                }
                for (ma, ca) in a {
                    for (mb, cb) in b {
                        let p = ca.clone() * cb;
                        let key = ma.mul(mb);
                        match acc.get_mut(&key) {
                            Some(v) => *v += &p,
                            None => {
                                acc.insert(key, p);
                            }
                        }
                    }
                }
            }
            s.buckets[m] = sorted_bucket(acc);
        }
        Ok(s)
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn try_reciprocal(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = c0
            .inv()
            .ok_or_else(|| Error::Precondition("reciprocal of a series with zero constant term".into()))?;
        // 1/s = inv0 · Σ (−w)^j with w = inv0·s − 1, which has valuation ≥ 1.
        let w = self.scale(&inv0).try_sub(&Self::one(self.nvars, self.order))?;
        let mut acc = Self::one(self.nvars, self.order);
        for _ in 0..self.order {
            acc = Self::one(self.nvars, self.order).try_sub(&acc.try_mul(&w)?)?;
        }
        Ok(acc.scale(&inv0))
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        self.map_terms(|_, v| v.clone() * c)
    }

    /// Multiplies by the monomial `c·x^m`. The order rises by `deg m`, since
    /// the unknown tail is shifted up with everything else.
    pub fn mul_monomial(&self, m: &MultiIndex, c: &K) -> Self {
        let shift = m.degree() as usize;
        let mut s = Self::zero(self.nvars, self.order + shift);
        if c.is_zero() {
            return s;
        }
        for (d, b) in self.buckets.iter().enumerate() {
            s.buckets[d + shift] = b.iter().map(|(k, v)| (k.mul(m), v.clone() * c)).collect();
        }
        s
    }

    /// Formal `∂/∂x_j` (0-based). The result has order `N − 1`.
    pub fn partial(&self, j: usize) -> Result<Self> {
        if j >= self.nvars {
            return Err(Error::IndexOutOfRange { index: j, nvars: self.nvars });
        }
        let order = self.order.saturating_sub(1);
        let mut s = Self::zero(self.nvars, order);
        for d in 1..=self.order {
            if d - 1 > order {
                break;
            }
            s.buckets[d - 1] = self.buckets[d]
                .iter()
                .filter_map(|(m, c)| {
                    let e = m.get(j);
                    m.lower(j).map(|low| (low, c.clone() * &K::from_i64(e as i64)))
                })
                .collect();
            // Lowering one variable keeps the descending lex order.
        }
        Ok(s)
    }

    /// Formal composition `self(images₁, …, imagesₙ)`.
    ///
    /// All images must share a number of variables (the target dimension).
    pub fn substitute(&self, images: &[Self], mode: Composition) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::Structural(format!(
                "{} images for a series in {} variables",
                images.len(),
                self.nvars
            )));
        }
        let target = images.first().map(|s| s.nvars).unwrap_or(self.nvars);
        if images.iter().any(|s| s.nvars != target) {
            return Err(Error::Structural("images over different variable counts".into()));
        }
        let min_image_order = images.iter().map(|s| s.order).min().unwrap_or(self.order);
        let order = match mode {
            Composition::Strict => {
                if let Some(i) = images.iter().position(|s| !s.constant_term().is_zero()) {
                    return Err(Error::ConstantTerm { index: i });
                }
                self.order.min(min_image_order)
            }
            Composition::Polynomial => min_image_order,
        };
        let mut max_exp = vec![0u32; self.nvars];
        for (m, _) in self.terms() {
            for (i, e) in max_exp.iter_mut().enumerate() {
                *e = (*e).max(m.get(i));
            }
        }
        let powers: Vec<Vec<Self>> = images
            .iter()
            .zip(&max_exp)
            .map(|(img, &e)| {
                let img = img.truncated(order);
                let mut p = vec![Self::one(target, order)];
                for k in 1..=e as usize {
                    let next = p[k - 1].try_mul(&img).expect("same dimension");
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc: Vec<HashMap<MultiIndex, K>> = vec![HashMap::new(); order + 1];
        for (m, c) in self.terms() {
            let mut prod = Self::constant(target, order, c.clone());
            for (i, p) in powers.iter().enumerate() {
                let e = m.get(i) as usize;
                if e > 0 {
                    prod = prod.try_mul(&p[e]).expect("same dimension");
                }
            }
            for (d, b) in prod.buckets.into_iter().enumerate() {
                for (k, v) in b {
                    match acc[d].get_mut(&k) {
                        Some(x) => *x += &v,
                        None => {
                            acc[d].insert(k, v);
                        }
                    }
                }
            }
        }
        let mut s = Self::zero(target, order);
        for (d, map) in acc.into_iter().enumerate() {
            s.buckets[d] = sorted_bucket(map);
        }
        Ok(s)
    }

    /// Double-precision evaluation of the stored polynomial at `point`.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.nvars {
            return Err(Error::Structural(format!(
                "point of dimension {} for a series in {} variables",
                point.len(),
                self.nvars
            )));
        }
        let max_deg = self.degree().unwrap_or(0);
        let pows: Vec<Vec<Complex64>> = point
            .iter()
            .map(|&z| {
                let mut v = Vec::with_capacity(max_deg + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=max_deg {
                    v.push(acc);
                    acc *= z;
                }
                v
            })
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in self.terms() {
            let mut t = c.to_complex();
            for (i, p) in pows.iter().enumerate() {
                let e = m.get(i) as usize;
                if e > 0 {
                    t *= p[e];
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Applies `f` to every coefficient, pruning zeros.
    pub fn map_coeffs<L: Scalar>(&self, f: impl Fn(&K) -> L) -> Series<L> {
        let mut s = Series::<L>::zero(self.nvars, self.order);
        for (d, b) in self.buckets.iter().enumerate() {
            s.buckets[d] = b
                .iter()
                .map(|(m, c)| (*m, f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
        }
        s
    }

    fn map_terms(&self, f: impl Fn(&MultiIndex, &K) -> K) -> Self {
        let mut s = Self::zero(self.nvars, self.order);
        for (d, b) in self.buckets.iter().enumerate() {
            s.buckets[d] = b
                .iter()
                .map(|(m, c)| (*m, f(m, c)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
        }
        s
    }

    /// Re-embeds into `nvars` variables, mapping old variable `i` to `map[i]`.
    pub fn remap_vars(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let terms = self.terms().map(|(m, c)| {
            let mut out = MultiIndex::zero();
            for (i, &j) in map.iter().enumerate() {
                out = out.with(j, out.get(j) + m.get(i));
            }
            (out, c.clone())
        });
        Series::from_terms(nvars, self.order, terms)
    }

    /// Coefficient-wise equality through degree `n`, ignoring declared orders.
    pub fn agrees_through(&self, other: &Self, n: usize) -> bool {
        self.nvars == other.nvars
            && (0..=n).all(|d| self.bucket(d) == other.bucket(d))
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (m, c) in self.terms() {
            let mono = m.fmt_with(names);
            let coeff = c.to_string();
            let (neg, mag) = match coeff.strip_prefix('-') {
                Some(rest) if !rest.starts_with('(') => (true, rest.to_string()),
                _ => (false, coeff.clone()),
            };
            let body = if mono == "1" {
                mag
            } else if mag == "1" {
                mono
            } else {
                format!("{mag}*{mono}")
            };
            if out.is_empty() {
                out = if neg { format!("-{body}") } else { body };
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

/// Default variable names `x1 … xn`.
pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{i}")).collect()
}

impl<K: Scalar> fmt::Display for Series<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.fmt_with(&default_names(self.nvars)), self.order + 1)
    }
}

fn sorted_bucket<K: Scalar>(map: HashMap<MultiIndex, K>) -> Vec<(MultiIndex, K)> {
    let mut v: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    v
}

fn merge<K: Scalar>(
    a: &[(MultiIndex, K)],
    b: &[(MultiIndex, K)],
    op: impl Fn(K, &K) -> K,
) -> Vec<(MultiIndex, K)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((b[j].0, op(K::zero(), &b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = op(a[i].1.clone(), &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(m, c)| (*m, op(K::zero(), c))));
    out
}

impl<K: Scalar> Neg for &Series<K> {
    type Output = Series<K>;
    fn neg(self) -> Series<K> {
        self.map_terms(|_, c| -c.clone())
    }
}

impl<K: Scalar> Neg for Series<K> {
    type Output = Series<K>;
    fn neg(self) -> Series<K> {
        -&self
    }
}

/// Panics on a variable-count mismatch; use [`Series::try_add`] at fallible boundaries.
impl<K: Scalar> Add for &Series<K> {
    type Output = Series<K>;
    fn add(self, rhs: Self) -> Series<K> {
        self.try_add(rhs).expect("series dimension mismatch")
    }
}

impl<K: Scalar> Sub for &Series<K> {
    type Output = Series<K>;
    fn sub(self, rhs: Self) -> Series<K> {
        self.try_sub(rhs).expect("series dimension mismatch")
    }
}

impl<K: Scalar> Mul for &Series<K> {
    type Output = Series<K>;
    fn mul(self, rhs: Self) -> Series<K> {
        self.try_mul(rhs).expect("series dimension mismatch")
    }
}

impl<K: Scalar> Add for Series<K> {
    type Output = Series<K>;
    fn add(self, rhs: Self) -> Series<K> {
        &self + &rhs
    }
}

impl<K: Scalar> Sub for Series<K> {
    type Output = Series<K>;
    fn sub(self, rhs: Self) -> Series<K> {
        &self - &rhs
    }
}

impl<K: Scalar> Mul for Series<K> {
    type Output = Series<K>;
    fn mul(self, rhs: Self) -> Series<K> {
        &self * &rhs
    }
}

impl QSeries {
    /// Promotes real coefficients to Q(i).
    pub fn complexify(&self) -> Series<super::scalar::GaussianRational> {
        self.map_coeffs(|c| super::scalar::GaussianRational::real(c.clone()))
    }
}

/// `Σ_{j<r} x_j^d` in `nvars` variables: the truncated Pham polynomial.
pub fn pham<K: Scalar>(r: usize, nvars: usize, d: u32, order: usize) -> Series<K> {
    Series::from_terms(
        nvars,
        order,
        (0..r).map(|j| (MultiIndex::var(j).with(j, d), K::one())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{rat, GaussianRational};

    fn x(n: usize, i: usize) -> QSeries {
        QSeries::var(n, i, 10)
    }

    fn c(v: i64) -> Rational {
        rat(v, 1)
    }

    #[test]
    fn reciprocal_inverts() {
        let s = &QSeries::constant(2, 10, c(2)) + &(&x(2, 0) + &(&x(2, 1) * &x(2, 0)));
        let r = s.try_reciprocal().unwrap();
        assert_eq!(s.try_mul(&r).unwrap(), QSeries::one(2, 10));
        assert!(x(2, 0).try_reciprocal().is_err());
    }

    #[test]
    fn additive_inverse_vanishes() {
        let sq = &x(2, 0) * &x(2, 0);
        assert!((&sq + &-&sq).is_zero());
    }

    #[test]
    fn sum_collects_like_terms() {
        let (a, b) = (x(2, 0), x(2, 1));
        let s = &(&a + &b) + &(&a - &b);
        assert_eq!(s, a.scale(&c(2)));
    }

    #[test]
    fn pham_gradient_plus_perturbation() {
        // 2x₁ (from ∂P₃,₄,₂/∂x₁) plus x₁x₂
        let p: QSeries = pham(3, 4, 2, 10);
        let dp = p.partial(0).unwrap();
        let pert = &x(4, 0) * &x(4, 1);
        let s = &dp + &pert.truncated(9);
        let expected = QSeries::from_terms(
            4,
            9,
            [(MultiIndex::var(0), c(2)), (MultiIndex::new(&[1, 1]), c(1))],
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn products() {
        let (a, b) = (x(2, 0), x(2, 1));
        assert_eq!(&(&a + &b) * &(&a - &b), &(&a * &a) - &(&b * &b));
        let xy = &a * &b;
        let one = QSeries::one(2, 10);
        assert_eq!(&xy * &(&one + &xy), &xy + &(&xy * &xy));
        let p: QSeries = pham(2, 2, 4, 10);
        let t = p.truncated(3);
        assert!((&t * &one).is_zero());
        assert_eq!((&t * &one).order(), 3);
    }

    #[test]
    fn dimension_mismatch_is_structural() {
        assert!(matches!(x(2, 0).try_add(&x(3, 0)), Err(Error::Structural(_))));
        assert!(matches!(x(2, 0).try_mul(&x(3, 0)), Err(Error::Structural(_))));
    }

    #[test]
    fn partial_derivatives() {
        let q = &(&x(2, 0) * &x(2, 0)) + &(&x(2, 1) * &x(2, 1));
        assert_eq!(q.partial(0).unwrap(), x(2, 0).scale(&c(2)).truncated(9));
        let p: QSeries = pham(3, 3, 3, 10);
        let e = QSeries::monomial(3, 9, MultiIndex::new(&[2]), c(3));
        assert_eq!(p.partial(0).unwrap(), e);
        let p4: QSeries = pham(2, 2, 4, 10);
        assert_eq!(p4.partial(1).unwrap(), QSeries::monomial(2, 9, MultiIndex::new(&[0, 3]), c(4)));
        assert!(matches!(p4.partial(2), Err(Error::IndexOutOfRange { index: 2, nvars: 2 })));
    }

    #[test]
    fn blowup_substitution() {
        // xy with y -> t·x in coordinates (x, t)
        let xy = &x(2, 0) * &x(2, 1);
        let img = [x(2, 0), &x(2, 1) * &x(2, 0)];
        let got = xy.substitute(&img, Composition::Strict).unwrap();
        assert_eq!(got, QSeries::monomial(2, 10, MultiIndex::new(&[2, 1]), c(1)));
    }

    #[test]
    fn slice_and_shear_substitutions() {
        let sq = |s: &QSeries| s * s;
        let f = &(&sq(&x(3, 0)) + &sq(&x(3, 1))) + &sq(&x(3, 2));
        let img = [x(3, 0), x(3, 1), QSeries::zero(3, 10)];
        let got = f.substitute(&img, Composition::Strict).unwrap();
        assert_eq!(got, &sq(&x(3, 0)) + &sq(&x(3, 1)));

        let g = &sq(&x(2, 0)) + &sq(&x(2, 1));
        let img = [x(2, 0), &x(2, 1) + &sq(&x(2, 0))];
        let got = g.substitute(&img, Composition::Strict).unwrap();
        let expected = QSeries::from_terms(
            2,
            10,
            [
                (MultiIndex::new(&[2, 0]), c(1)),
                (MultiIndex::new(&[0, 2]), c(1)),
                (MultiIndex::new(&[2, 1]), c(2)),
                (MultiIndex::new(&[4, 0]), c(1)),
            ],
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn constant_terms_need_override() {
        let f = &x(1, 0) * &x(1, 0);
        let shifted = [&x(1, 0) + &QSeries::one(1, 10)];
        assert!(matches!(
            f.substitute(&shifted, Composition::Strict),
            Err(Error::ConstantTerm { index: 0 })
        ));
        let got = f.substitute(&shifted, Composition::Polynomial).unwrap();
        let expected = &(&f + &x(1, 0).scale(&c(2))) + &QSeries::one(1, 10);
        assert_eq!(got, expected);
    }

    #[test]
    fn evaluation() {
        let sq = |s: &QSeries| s * s;
        let q = &sq(&x(2, 0)) + &sq(&x(2, 1));
        let p = |a: f64, b: f64| Complex64::new(a, b);
        assert_eq!(q.evaluate(&[p(3.0, 0.0), p(4.0, 0.0)]).unwrap(), p(25.0, 0.0));
        let xy = &x(2, 0) * &x(2, 1);
        assert_eq!(xy.evaluate(&[p(1.0, 0.0), p(0.0, 1.0)]).unwrap(), p(0.0, 1.0));
        let p4: QSeries = pham(2, 2, 4, 10);
        assert_eq!(p4.evaluate(&[p(1.0, 0.0), p(1.0, 0.0)]).unwrap(), p(2.0, 0.0));
        assert!(q.evaluate(&[p(1.0, 0.0)]).is_err());
    }

    #[test]
    fn complexify_keeps_terms() {
        let q = &x(2, 0) * &x(2, 1);
        let z = q.complexify();
        assert_eq!(z.coeff(&MultiIndex::new(&[1, 1])), GaussianRational::real(c(1)));
        assert_eq!(z.field(), FieldTag::GaussianRational);
    }

    #[test]
    fn display() {
        let s = &x(2, 0).scale(&rat(-1, 2)) + &(&x(2, 1) * &x(2, 1));
        assert_eq!(s.fmt_with(&["x".into(), "y".into()]), "-1/2*x + y^2");
    }
}
