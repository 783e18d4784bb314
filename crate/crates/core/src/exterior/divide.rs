use std::collections::BTreeMap;



use crate::algebra::{MultiIndex, Scalar, Series};

/// Remainder of `s` on division by the homogeneous `p`, pure lex order with `x₁ > x₂ > …`.
///
/// Since `p` is homogeneous each degree of `s` reduces independently.
pub fn lex_remainder<K: Scalar>(s: &Series<K>, p: &Series<K>) -> Series<K> {
    let deg_p = p.homogeneous_degree().expect("homogeneous divisor");
    let p_terms = p.bucket(deg_p);
    let (lead_m, lead_c) = &p_terms[0];
    let lead_inv = lead_c.inv().expect("nonzero lead");
    let mut rem = Vec::new();
    for d in 0..=s.order() {
        let bucket = s.bucket(d);
        if bucket.is_empty() {
            continue;
        }
        if d < deg_p {
            rem.extend(bucket.iter().cloned());
            continue;
        }
        let mut work: BTreeMap<MultiIndex, K> = bucket.iter().cloned().collect();
        while let Some((m, c)) = work.pop_last() {
            match lead_m.quotient(&m) {
                Some(q) => {
                    let f = c * &lead_inv;
                    for (pm, pc) in &p_terms[1..] {
                        let key = q.mul(pm);
                        let delta = f.clone() * pc;
                        let entry = work.entry(key).or_insert_with(K::zero);
                        *entry -= &delta;
                        if entry.is_zero() {
                            work.remove(&key);
                        }
                    }
                }
                None => rem.push((m, c)),
            }
        }
    }
    Series::from_terms(s.nvars(), s.order(), rem)
}
