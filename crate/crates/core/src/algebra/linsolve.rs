//! Exact linear algebra over a [`Scalar`] field.
//!
//! [`ImageBasis`] incrementally builds an echelon basis of the column space of a
//! sparse linear map, one unknown at a time in a fixed order. A column that
//! reduces to zero depends on earlier ones; its unknown is free and is pinned to
//! zero in every solution. Reducing a target vector yields both a solution and
//! the canonical normal form of the target modulo the image.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::ops::Bound::{Excluded, Unbounded};



use super::scalar::Scalar;

/// Sparse vector: `(key, coefficient)` pairs sorted ascending by key, no zeros.
pub type SparseVec<Key, K> = Vec<(Key, K)>;

struct Row<Key, K> {
    /// Lead entry first, with coefficient one.
    entries: SparseVec<Key, K>,
    /// Unknown combination whose image is `entries`.
    combo: Vec<(usize, K)>,
}

pub struct ImageBasis<Key, K> {
    rows: Vec<Row<Key, K>>,
    leads: HashMap<Key, usize>,
    free: Vec<usize>,
}

/// Result of reducing a target against the image.
#[derive(Clone, Debug)]
pub struct Reduction<Key, K> {
    /// Canonical remainder, zero iff the target lies in the image.
    pub normal_form: SparseVec<Key, K>,
    /// Values of the unknowns (absent means zero) with `image(solution) = target − normal_form`.
    pub solution: BTreeMap<usize, K>,
}

impl<Key, K> Reduction<Key, K> {
    pub fn is_consistent(&self) -> bool {
        self.normal_form.is_empty()
    }
}

impl<Key: Ord + Hash + Clone, K: Scalar> Default for ImageBasis<Key, K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<Key: Ord + Hash + Clone, K: Scalar> ImageBasis<Key, K> {
    pub fn new() -> Self {
        Self {
            rows: Vec::new(),
            leads: HashMap::new(),
            free: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Unknowns whose columns were dependent on earlier ones.
    pub fn free_unknowns(&self) -> &[usize] {
        &self.free
    }

    /// Adds the image of unknown `idx`. Returns `false` if it was dependent.
    pub fn push_column(&mut self, idx: usize, column: impl IntoIterator<Item = (Key, K)>) -> bool {
        let mut work: BTreeMap<Key, K> = BTreeMap::new();
        for (k, c) in column {
            accumulate(&mut work, k, &c);
        }
        let mut combo: BTreeMap<usize, K> = BTreeMap::new();
        combo.insert(idx, K::one());
        loop {
            let Some((lead, lead_c)) = work.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
                self.free.push(idx);
                return false;
            };
            match self.leads.get(&lead) {
                Some(&r) => {
                    let row = &self.rows[r];
                    work.remove(&lead);
                    for (k, c) in &row.entries[1..] {
                        accumulate(&mut work, k.clone(), &-(lead_c.clone() * c));
                    }
                    for (u, c) in &row.combo {
                        accumulate(&mut combo, *u, &-(lead_c.clone() * c));
                    }
                }
                None => {
                    let inv = lead_c.inv().expect("nonzero lead");
                    let entries = work.into_iter().map(|(k, c)| (k, c * &inv)).collect();
                    let combo = combo.into_iter().map(|(u, c)| (u, c * &inv)).collect();
                    self.leads.insert(lead, self.rows.len());
                    self.rows.push(Row { entries, combo });
                    return true;
                }
            }
        }
    }

    /// Fully reduces `target` modulo the image.
    pub fn reduce(&self, target: impl IntoIterator<Item = (Key, K)>) -> Reduction<Key, K> {
        let mut work: BTreeMap<Key, K> = BTreeMap::new();
        for (k, c) in target {
            accumulate(&mut work, k, &c);
        }
        let mut solution: BTreeMap<usize, K> = BTreeMap::new();
        let mut normal_form = Vec::new();
        let mut next = work.keys().next().cloned();
        while let Some(k) = next {
            if let Some(&r) = self.leads.get(&k) {
                let f = work.remove(&k).expect("present");
                let row = &self.rows[r];
                for (k2, c2) in &row.entries[1..] {
                    accumulate(&mut work, k2.clone(), &-(f.clone() * c2));
                }
                for (u, c) in &row.combo {
                    accumulate(&mut solution, *u, &(f.clone() * c));
                }
            } else {
                normal_form.push((k.clone(), work[&k].clone()));
            }
            next = work.range((Excluded(&k), Unbounded)).next().map(|(k, _)| k.clone());
        }
        Reduction { normal_form, solution }
    }
}

fn accumulate<Key: Ord, K: Scalar>(map: &mut BTreeMap<Key, K>, k: Key, c: &K) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&k) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                map.remove(&k);
            }
        }
        None => {
            map.insert(k, c.clone());
        }
    }
}

/// Rank of a dense matrix by Gaussian elimination.
pub fn rank<K: Scalar>(rows: &[Vec<K>]) -> usize {
    let mut m: Vec<Vec<K>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].inv().expect("nonzero pivot");
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone() * &inv;
                for j in col..ncols {
                    let t = f.clone() * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<K: Scalar>(rows: &[Vec<K>]) -> Option<Vec<Vec<K>>> {
    let n = rows.len();
    let mut a: Vec<Vec<K>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { K::one() } else { K::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].inv()?;
        for j in 0..2 * n {
            a[col][j] = a[col][j].clone() * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    let t = f.clone() * &a[col][j];
                    a[i][j] -= &t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{rat, Rational};

    #[test]
    fn solves_and_pins_free_unknowns() {
        // columns: u0 -> e0 + e1, u1 -> 2e0 + 2e1 (dependent), u2 -> e2
        let mut b: ImageBasis<u32, Rational> = ImageBasis::new();
        assert!(b.push_column(0, [(0, rat(1, 1)), (1, rat(1, 1))]));
        assert!(!b.push_column(1, [(0, rat(2, 1)), (1, rat(2, 1))]));
        assert!(b.push_column(2, [(2, rat(1, 1))]));
        assert_eq!(b.rank(), 2);
        assert_eq!(b.free_unknowns(), &[1]);

        let red = b.reduce([(0, rat(3, 1)), (1, rat(3, 1)), (2, rat(-1, 2))]);
        assert!(red.is_consistent());
        assert_eq!(red.solution.get(&0), Some(&rat(3, 1)));
        assert_eq!(red.solution.get(&1), None);
        assert_eq!(red.solution.get(&2), Some(&rat(-1, 2)));

        let red = b.reduce([(0, rat(1, 1))]);
        assert_eq!(red.normal_form, vec![(1, rat(-1, 1))]);
    }

    #[test]
    fn dense_rank_and_inverse() {
        let m = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]];
        assert_eq!(rank(&m), 1);
        assert!(inverse(&m).is_none());
        let m = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![rat(1, 1), rat(-1, 1)], vec![rat(-1, 1), rat(2, 1)]]);
    }
}
