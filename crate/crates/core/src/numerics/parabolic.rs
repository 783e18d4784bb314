use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitVerdict {
    Constant,
    MonotoneConvergent,
    MonotoneDivergent,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParabolicClass {
    /// `a₁, a₂, …` of `h(z) = Σ a_k z^k`.
    pub coefficients: Vec<f64>,
    pub identity: bool,
    /// `k` with `h(z) − z = a_{k+1} z^{k+1} + …`; `None` for the identity.
    pub tangency_order: Option<usize>,
    pub leading: Option<f64>,
    pub orbit: Vec<f64>,
    pub verdict: OrbitVerdict,
    /// Some iterate came back to the seed.
    pub closed: bool,
    /// Set when the orbit left the disc where the truncated germ is trusted.
    pub warning: Option<String>,
}

fn apply(coeffs: &[f64], z: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| (acc + c) * z)
}

/// Iterates a tangent-to-identity germ on the real line from `seed`.
pub fn parabolic_orbit_demo(coeffs: &[f64], seed: f64, iterations: usize, radius: f64) -> Result<ParabolicClass> {
    if coeffs.first() != Some(&1.0) {
        return Err(Error::Precondition("germ must be tangent to the identity (a₁ = 1)".into()));
    }
    if !(seed.abs() < radius) {
        return Err(Error::Precondition("seed must lie inside the disc".into()));
    }
    let first = coeffs.iter().enumerate().skip(1).find(|(_, c)| **c != 0.0);
    let (tangency_order, leading) = match first {
        Some((i, c)) => (Some(i), Some(*c)),
        None => (None, None),
    };
    let mut orbit = vec![seed];
    let mut warning = None;
    for _ in 0..iterations {
        let z = apply(coeffs, *orbit.last().expect("seeded"));
        orbit.push(z);
        if !(z.abs() < radius) {
            warning = Some(format!("orbit left the disc |z| < {radius}; truncated germ no longer valid"));
            break;
        }
    }
    let steps: Vec<f64> = orbit.windows(2).map(|w| w[1] - w[0]).collect();
    let increasing = steps.iter().all(|s| *s > 0.0);
    let decreasing = steps.iter().all(|s| *s < 0.0);
    let verdict = if steps.iter().all(|s| *s == 0.0) {
        OrbitVerdict::Constant
    } else if increasing || decreasing {
        let shrinking = orbit.windows(2).all(|w| w[1].abs() < w[0].abs());
        let growing = orbit.windows(2).all(|w| w[1].abs() > w[0].abs());
        if shrinking {
            OrbitVerdict::MonotoneConvergent
        } else if growing {
            OrbitVerdict::MonotoneDivergent
        } else {
            OrbitVerdict::Inconclusive
        }
    } else {
        OrbitVerdict::Inconclusive
    };
    let closed = orbit.iter().skip(1).any(|z| *z == seed);
    Ok(ParabolicClass {
        coefficients: coeffs.to_vec(),
        identity: tangency_order.is_none(),
        tangency_order,
        leading,
        orbit,
        verdict,
        closed,
        warning,
    })
}
