use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{MultiIndex, QSeries, Rational};
use crate::error::{Error, Result};
use crate::exterior::QForm;

#[derive(Clone, Debug, PartialEq)]
pub enum Irreducibility {
    Irreducible,
    /// A proper factor over the rationals.
    Reducible { witness: QSeries },
    Unknown,
}

impl Irreducibility {
    pub fn label(&self) -> &'static str {
        match self {
            Irreducibility::Irreducible => "irreducible",
            Irreducibility::Reducible { .. } => "reducible",
            Irreducibility::Unknown => "unknown",
        }
    }
}

impl Serialize for Irreducibility {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Irreducibility::Reducible { witness } => s.serialize_str(&format!("reducible({witness})")),
            other => s.serialize_str(other.label()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangentCone {
    /// Leading index `ν` of `ω`.
    pub leading: usize,
    /// `P_{ν+1} = ι_R ω_ν`.
    pub polynomial: QSeries,
    /// `ν + 1` when `P` is nonzero.
    pub degree: Option<usize>,
    pub dicritical: bool,
    /// `None` in the dicritical case.
    pub irreducibility: Option<Irreducibility>,
}

pub fn tangent_cone(omega: &QForm) -> Result<TangentCone> {
    let dec = omega.homogeneous_parts();
    let (nu, lead) = match (dec.leading, dec.leading_part()) {
        (Some(nu), Some(lead)) => (nu, lead),
        _ => return Err(Error::ZeroForm),
    };
    let p = lead.euler_contract()?.as_function().homogeneous_part(nu + 1);
    let dicritical = p.is_zero();
    Ok(TangentCone {
        leading: nu,
        degree: (!dicritical).then_some(nu + 1),
        irreducibility: (!dicritical).then(|| irreducibility(&p)),
        polynomial: p,
        dicritical,
    })
}

/// `Some((p, s))` when `d = p^s` for a prime `p` and `s ≥ 1`.
pub fn prime_power(d: u64) -> Option<(u64, u32)> {
    if d < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= d && !d.is_multiple_of(p) {
        p += 1;
    }
    if !d.is_multiple_of(p) {
        p = d;
    }
    let (mut rest, mut s) = (d, 0);
    while rest % p == 0 {
        rest /= p;
        s += 1;
    }
    (rest == 1).then_some((p, s))
}

fn used_vars(p: &QSeries) -> Vec<usize> {
    (0..p.nvars()).filter(|&i| p.terms().any(|(m, _)| m.get(i) > 0)).collect()
}

/// `Σ_{j∈J} x_j^d` with equal coefficients and `|J| ≥ 3`; irreducible by the
/// classical smoothness argument for Fermat hypersurfaces.
fn is_pham_pattern(p: &QSeries) -> bool {
    let terms: Vec<_> = p.terms().collect();
    terms.len() >= 3
        && terms.iter().all(|(m, c)| {
            (0..p.nvars()).filter(|&i| m.get(i) > 0).count() == 1 && *c == terms[0].1
        })
}

/// Bounded factor search: monomial factors, quadratic forms (exact
/// diagonalization), binary forms (rational roots, complete up to degree 3)
/// and the Pham pattern. Anything else is `Unknown`.
pub(crate) fn irreducibility(p: &QSeries) -> Irreducibility {
    let n = p.nvars();
    let Some(deg) = p.homogeneous_degree() else {
        return Irreducibility::Unknown;
    };
    if deg <= 1 {
        return Irreducibility::Irreducible;
    }
    if is_pham_pattern(p) {
        return Irreducibility::Irreducible;
    }
    for i in 0..n {
        if p.terms().all(|(m, _)| m.get(i) > 0) {
            return Irreducibility::Reducible { witness: QSeries::var(n, i, p.order()) };
        }
    }
    if deg == 2 {
        return quadratic(p);
    }
    let vars = used_vars(p);
    if vars.len() <= 2 {
        let (a, b) = (vars[0], vars[1]);
        let coeffs: Vec<Rational> = (0..=deg)
            .map(|k| p.coeff(&MultiIndex::zero().with(a, k as u32).with(b, (deg - k) as u32)))
            .collect();
        return match rational_roots(&coeffs) {
            Some(roots) if !roots.is_empty() => {
                let t = &roots[0];
                let witness = &QSeries::var(n, a, p.order()).scale(&Rational::from_integer(t.denom().clone()))
                    - &QSeries::var(n, b, p.order()).scale(&Rational::from_integer(t.numer().clone()));
                Irreducibility::Reducible { witness }
            }
            Some(_) if deg <= 3 => Irreducibility::Irreducible,
            _ => Irreducibility::Unknown,
        };
    }
    Irreducibility::Unknown
}

/// `P = Σ a_k L_k²` over the rationals; factors iff the rank is 1, or 2 with
/// `−a₂/a₁` a rational square.
fn quadratic(p: &QSeries) -> Irreducibility {
    let n = p.nvars();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut s = vec![vec![Rational::zero(); n]; n];
    for (m, c) in p.bucket(2) {
        let idx: Vec<usize> = (0..n).filter(|&i| m.get(i) > 0).collect();
        match idx.as_slice() {
            [i] => s[*i][*i] = c.clone(),
            [i, j] => {
                s[*i][*j] = c.clone() * &half;
                s[*j][*i] = c.clone() * &half;
            }
            _ => unreachable!(),
        }
    }
    let value = |s: &[Vec<Rational>], v: &[Rational]| -> Rational {
        let mut acc = Rational::zero();
        for i in 0..n {
            for j in 0..n {
                acc += &(s[i][j].clone() * &v[i] * &v[j]);
            }
        }
        acc
    };
    let mut parts: Vec<(Rational, Vec<Rational>)> = Vec::new();
    loop {
        let mut pick = None;
        'search: for i in 0..n {
            for j in i..n {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::one();
                if j != i {
                    v[j] = Rational::one();
                }
                let q = value(&s, &v);
                if !q.is_zero() {
                    pick = Some((v, q));
                    break 'search;
                }
            }
        }
        let Some((v, q)) = pick else { break };
        let l: Vec<Rational> = (0..n)
            .map(|i| (0..n).fold(Rational::zero(), |acc, j| acc + s[i][j].clone() * &v[j]))
            .collect();
        for i in 0..n {
            for j in 0..n {
                let t = l[i].clone() * &l[j] / &q;
                s[i][j] -= &t;
            }
        }
        parts.push((q.recip(), l));
    }
    let linear = |l: &[Rational]| {
        QSeries::from_terms(n, p.order(), l.iter().enumerate().map(|(i, c)| (MultiIndex::var(i), c.clone())))
    };
    match parts.len() {
        1 => Irreducibility::Reducible { witness: linear(&parts[0].1) },
        2 => {
            let ratio = -(parts[1].0.clone() / &parts[0].0);
            match rational_sqrt(&ratio) {
                Some(r) => {
                    let w: Vec<Rational> =
                        parts[0].1.iter().zip(&parts[1].1).map(|(a, b)| a.clone() - r.clone() * b).collect();
                    Irreducibility::Reducible { witness: linear(&w) }
                }
                None => Irreducibility::Irreducible,
            }
        }
        _ => Irreducibility::Irreducible,
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (a, b) = (q.numer().sqrt(), q.denom().sqrt());
    (&a * &a == *q.numer() && &b * &b == *q.denom()).then(|| Rational::new(a, b))
}

/// Distinct rational roots of `Σ c_k t^k`, or `None` when the integer
/// coefficients are too large for the divisor search.
pub(crate) fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut c: Vec<Rational> = coeffs.to_vec();
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    let mut roots = Vec::new();
    if c.len() <= 1 {
        return Some(roots);
    }
    if c[0].is_zero() {
        roots.push(Rational::zero());
        while c.first().is_some_and(Zero::is_zero) {
            c.remove(0);
        }
        if c.len() <= 1 {
            return Some(roots);
        }
    }
    let lcm = c.iter().fold(BigInt::one(), |acc, r| num_integer::lcm(acc, r.denom().clone()));
    let ints: Vec<BigInt> = c.iter().map(|r| (r * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let lead = ints.last().expect("nonempty").abs().to_u64()?;
    let constant = ints[0].abs().to_u64()?;
    if lead > 1_000_000_000_000 || constant > 1_000_000_000_000 {
        return None;
    }
    let eval = |t: &Rational| c.iter().rev().fold(Rational::zero(), |acc, k| acc * t + k);
    for p in divisors(constant) {
        for q in divisors(lead) {
            for sign in [1i64, -1] {
                let t = Rational::new(BigInt::from(p) * sign, BigInt::from(q));
                if !roots.contains(&t) && eval(&t).is_zero() {
                    roots.push(t);
                }
            }
        }
    }
    Some(roots)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}
