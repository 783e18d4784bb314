//! Exact coefficient fields: the rationals and the Gaussian rationals Q(i).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational number. Always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Which exact field a series lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldTag {
    Rational,
    GaussianRational,
}

/// Coefficient field of the symbolic layer.
///
/// Arithmetic is by value on the left and by reference on the right so hot loops
/// can avoid cloning the right operand.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + for<'r> Add<&'r Self, Output = Self>
    + for<'r> Sub<&'r Self, Output = Self>
    + for<'r> Mul<&'r Self, Output = Self>
    + for<'r> Div<&'r Self, Output = Self>
    + for<'r> AddAssign<&'r Self>
    + for<'r> SubAssign<&'r Self>
    + Send
    + Sync
    + 'static
{
    const FIELD: FieldTag;

    fn from_rational(q: Rational) -> Self;

    fn to_complex(&self) -> Complex64;

    fn conj(&self) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(rat(v, 1))
    }

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self)
        }
    }
}

/// Shorthand for `num / den`.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    // BigRational::to_f64 handles huge numerators/denominators without overflow.
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Scalar for Rational {
    const FIELD: FieldTag = FieldTag::Rational;

    fn from_rational(q: Rational) -> Self {
        q
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn conj(&self) -> Self {
        self.clone()
    }
}

/// An element `re + i·im` of Q(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn real(re: Rational) -> Self {
        Self::new(re, Rational::zero())
    }

    /// Squared modulus `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({} - {}i)", self.re, -self.im.clone())
                } else {
                    write!(f, "({} + {}i)", self.re, self.im)
                }
            }
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self + &rhs
    }
}

impl<'r> Add<&'r GaussianRational> for GaussianRational {
    type Output = Self;
    fn add(self, rhs: &'r Self) -> Self {
        Self::new(self.re + &rhs.re, self.im + &rhs.im)
    }
}

impl<'r> Sub<&'r GaussianRational> for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: &'r Self) -> Self {
        Self::new(self.re - &rhs.re, self.im - &rhs.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self * &rhs
    }
}

impl<'r> Mul<&'r GaussianRational> for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: &'r Self) -> Self {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self::new(re, im)
    }
}

impl<'r> Div<&'r GaussianRational> for GaussianRational {
    type Output = Self;
    fn div(self, rhs: &'r Self) -> Self {
        let n = rhs.norm_sqr();
        assert!(!n.is_zero(), "division by zero in Q(i)");
        let prod = self * &Scalar::conj(rhs);
        Self::new(prod.re / &n, prod.im / &n)
    }
}

impl<'r> AddAssign<&'r GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &'r Self) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'r> SubAssign<&'r GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &'r Self) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Scalar for GaussianRational {
    const FIELD: FieldTag = FieldTag::GaussianRational;

    fn from_rational(q: Rational) -> Self {
        Self::real(q)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
}

/// Serializes a rational as its exact `p/q` string.
pub fn serialize_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::new(rat(a, 1), rat(b, 1))
    }

    #[test]
    fn rationals_stay_reduced() {
        let q = rat(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
    }

    #[test]
    fn gaussian_field_ops() {
        let a = g(1, 2);
        let b = g(3, -1);
        let p = a.clone() * &b;
        assert_eq!(p, g(5, 5));
        assert_eq!(p / &b, a);
        assert_eq!(GaussianRational::i() * &GaussianRational::i(), -GaussianRational::one());
        assert_eq!(a.inv().unwrap() * &a, GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn conjugation_is_an_involution() {
        let a = GaussianRational::new(rat(1, 3), rat(-7, 2));
        assert_eq!(Scalar::conj(&Scalar::conj(&a)), a);
        assert_eq!(a.clone() * &Scalar::conj(&a), GaussianRational::real(a.norm_sqr()));
    }
}
