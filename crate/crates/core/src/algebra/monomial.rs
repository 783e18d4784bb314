use std::cmp::Ordering;
use std::fmt;

/// Largest number of variables a series may carry.
///
/// Realification of complex series in 5 variables needs 10 real ones; 12 leaves headroom.
pub const MAX_VARS: usize = 12;

/// Exponent vector of a monomial `x₁^α₁ ⋯ xₙ^αₙ`.
///
/// Unused trailing slots are zero, so comparisons ignore the number of variables.
/// `Ord` is pure lexicographic order with `x₁ > x₂ > …`: a larger exponent of an
/// earlier variable compares greater.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    exps: [u8; MAX_VARS],
}

impl MultiIndex {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Panics if `exps.len() > MAX_VARS` or an exponent exceeds 255.
    pub fn new(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Self::zero();
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u8::try_from(e).expect("exponent overflow");
        }
        m
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::zero();
        m.exps[i] = 1;
        m
    }

    pub fn get(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> &[u8] {
        &self.exps[..nvars]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        m
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` if `self` divides `other`.
    pub fn quotient(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        let mut m = *other;
        for (a, b) in m.exps.iter_mut().zip(self.exps.iter()) {
            *a -= *b;
        }
        Some(m)
    }

    /// Lowers the exponent of variable `i` by one; `None` if it is already zero.
    pub fn lower(&self, i: usize) -> Option<Self> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut m = *self;
        m.exps[i] -= 1;
        Some(m)
    }

    pub fn raise(&self, i: usize) -> Self {
        let mut m = *self;
        m.exps[i] = m.exps[i].checked_add(1).expect("exponent overflow");
        m
    }

    pub fn with(&self, i: usize, e: u32) -> Self {
        let mut m = *self;
        m.exps[i] = u8::try_from(e).expect("exponent overflow");
        m
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// All monomials of total degree `deg` in `nvars` variables, in descending lex order.
    pub fn all_of_degree(nvars: usize, deg: u32) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = Self::zero();
        fill(nvars, 0, deg, &mut cur, &mut out);
        out
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, name) in names.iter().enumerate() {
            match self.exps[i] {
                0 => {}
                1 => parts.push(name.clone()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

fn fill(nvars: usize, i: usize, remaining: u32, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
    if nvars == 0 {
        if remaining == 0 {
            out.push(*cur);
        }
        return;
    }
    if i + 1 == nvars {
        cur.exps[i] = remaining as u8;
        out.push(*cur);
        cur.exps[i] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur.exps[i] = e as u8;
        fill(nvars, i + 1, remaining - e, cur, out);
    }
    cur.exps[i] = 0;
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps.cmp(&other.exps)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |p| p + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_prefers_earlier_variables() {
        let x = MultiIndex::var(0);
        let y2 = MultiIndex::new(&[0, 2]);
        assert!(x > y2);
        assert!(MultiIndex::new(&[1, 1]) > MultiIndex::new(&[1, 0, 5]));
    }

    #[test]
    fn enumerates_every_monomial_once() {
        let all = MultiIndex::all_of_degree(3, 4);
        assert_eq!(all.len(), 15);
        assert!(all.windows(2).all(|w| w[0] > w[1]));
        assert!(all.iter().all(|m| m.degree() == 4));
        assert_eq!(MultiIndex::all_of_degree(2, 0), vec![MultiIndex::zero()]);
    }

    #[test]
    fn division_of_monomials() {
        let a = MultiIndex::new(&[2, 1]);
        let b = MultiIndex::new(&[1, 0]);
        assert_eq!(b.quotient(&a), Some(MultiIndex::new(&[1, 1])));
        assert_eq!(a.quotient(&b), None);
    }
}
