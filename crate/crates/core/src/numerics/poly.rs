use num_complex::Complex64;

use crate::algebra::{Scalar, Series};

/// A series frozen to double precision for repeated evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    nvars: usize,
    degree: usize,
    terms: Vec<(Vec<usize>, Complex64)>,
}

impl Poly {
    pub fn from_series<K: Scalar>(s: &Series<K>) -> Self {
        let terms = s
            .terms()
            .map(|(m, c)| ((0..s.nvars()).map(|i| m.get(i) as usize).collect(), c.to_complex()))
            .collect();
        Self { nvars: s.nvars(), degree: s.degree().unwrap_or(0), terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn powers<T: Copy + std::ops::Mul<Output = T>>(&self, p: &[T], one: T) -> Vec<Vec<T>> {
        p.iter()
            .map(|&z| {
                let mut v = Vec::with_capacity(self.degree + 1);
                let mut acc = one;
                for _ in 0..=self.degree {
                    v.push(acc);
                    acc = acc * z;
                }
                v
            })
            .collect()
    }

    pub fn eval(&self, p: &[Complex64]) -> Complex64 {
        debug_assert_eq!(p.len(), self.nvars);
        let pows = self.powers(p, Complex64::new(1.0, 0.0));
        self.terms
            .iter()
            .map(|(e, c)| e.iter().enumerate().fold(*c, |acc, (i, &k)| acc * pows[i][k]))
            .sum()
    }

    /// Real part of the value at a real point.
    pub fn eval_real(&self, p: &[f64]) -> f64 {
        debug_assert_eq!(p.len(), self.nvars);
        let pows = self.powers(p, 1.0);
        self.terms
            .iter()
            .map(|(e, c)| e.iter().enumerate().fold(c.re, |acc, (i, &k)| acc * pows[i][k]))
            .sum()
    }
}
