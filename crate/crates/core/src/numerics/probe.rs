use serde::{Deserialize, Serialize};

use super::ode::{IntegratorConfig, SeriesField};
use super::poincare::{poincare_return, ReturnMapSample, ReturnStatus};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafVerdict {
    Closed,
    RecurrentNonclosed,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub sample: ReturnMapSample,
    pub verdict: LeafVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosednessProbe {
    pub tolerance: f64,
    pub results: Vec<ProbeResult>,
}

impl ClosednessProbe {
    pub fn all(&self, v: LeafVerdict) -> bool {
        self.results.iter().all(|r| r.verdict == v)
    }

    /// Common sign of the displacements when the whole grid spirals.
    pub fn spiral_sign(&self) -> Option<f64> {
        let signs: Vec<f64> = self.results.iter().filter_map(|r| r.sample.displacement.map(f64::signum)).collect();
        (self.all(LeafVerdict::RecurrentNonclosed) && !signs.is_empty() && signs.iter().all(|s| *s == signs[0]))
            .then(|| signs[0])
    }
}

/// Smallest displacement the integrator resolves at `x₀`.
pub fn noise_floor(x0: f64, cfg: &IntegratorConfig) -> f64 {
    100.0 * (cfg.atol + cfg.rtol * x0)
}

/// Three-valued closedness verdict per seed.
///
/// `|d| ≤ tol` is closed and a grid of same-signed `|d| > tol` is a spiral,
/// but only when `tol` and `|d|` both clear the integrator's noise floor;
/// everything else is inconclusive.
pub fn leaf_closedness_probe(field: &SeriesField, seeds: &[f64], tol: f64, cfg: &IntegratorConfig) -> Result<ClosednessProbe> {
    let samples = seeds.iter().map(|&x0| poincare_return(field, x0, cfg)).collect::<Result<Vec<_>>>()?;
    let spiralling = |s: &ReturnMapSample| s.displacement.is_some_and(|d| d.abs() > tol.max(noise_floor(s.x0, cfg)));
    let signs: Vec<f64> = samples.iter().filter_map(|s| s.displacement.map(f64::signum)).collect();
    let coherent = samples.iter().all(spiralling) && signs.iter().all(|s| *s == signs[0]);
    let results = samples
        .into_iter()
        .map(|sample| {
            let floor = noise_floor(sample.x0, cfg);
            let verdict = match (sample.status, sample.displacement) {
                (ReturnStatus::Returned, Some(d)) if d.abs() <= tol && tol >= floor => LeafVerdict::Closed,
                (ReturnStatus::Returned, Some(_)) if coherent => LeafVerdict::RecurrentNonclosed,
                _ => LeafVerdict::Inconclusive,
            };
            ProbeResult { sample, verdict }
        })
        .collect();
    Ok(ClosednessProbe { tolerance: tol, results })
}
