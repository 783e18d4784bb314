use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ode::{ComplexField, IntegratorConfig, StepFailure, Stepper};
use super::poly::Poly;
use crate::blowup::{divisor_singularities, BlowupChart};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolonomyConfig {
    /// The loop `t(θ) = center + radius·e^{iθ}` on the divisor.
    pub center: (f64, f64),
    pub radius: f64,
    /// Minimal distance between the loop and any divisor singularity.
    pub margin: f64,
    /// Largest seed modulus; the fan uses this, its half and its quarter.
    pub seed_radius: f64,
    pub fan_angles: usize,
    /// Angle offset of the seed fan.
    pub fan_rotation: f64,
    pub fit_degree: usize,
    pub integrator: IntegratorConfig,
}

impl Default for HolonomyConfig {
    fn default() -> Self {
        Self {
            center: (0.0, 0.0),
            radius: 1.0,
            margin: 0.1,
            seed_radius: 0.1,
            fan_angles: 8,
            fan_rotation: 0.0,
            fit_degree: 4,
            integrator: IntegratorConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolonomyGerm {
    /// `(x₀, h(x₀))` for the surviving seeds.
    pub samples: Vec<(Complex64, Complex64)>,
    /// Seeds whose leaf left the tube.
    pub dropped: Vec<Complex64>,
    /// Fitted `a₁, a₂, …`; only as many as the fit supports.
    pub coefficients: Vec<Complex64>,
    /// Largest least-squares residual over the samples.
    pub fit_residual: f64,
    pub modulus: f64,
    pub argument: f64,
    /// `sup |h(h(x₀)) − x₀|` over seeds whose second lap survived.
    pub period_two_defect: f64,
}

impl HolonomyGerm {
    pub fn multiplier(&self) -> Complex64 {
        self.coefficients[0]
    }
}

/// Leaf equation of a planar strict transform `A dz + B dt` over a loop on
/// the divisor `z = 0`.
pub struct LeafTransport {
    a: Poly,
    b: Poly,
    chart: usize,
    center: Complex64,
    radius: f64,
}

impl LeafTransport {
    pub fn new(chart: &BlowupChart, cfg: &HolonomyConfig) -> Result<Self> {
        let w = &chart.strict_transform;
        if w.nvars() != 2 {
            return Err(Error::Precondition("holonomy is computed for planar blow-ups".into()));
        }
        let center = Complex64::new(cfg.center.0, cfg.center.1);
        for s in divisor_singularities(chart)? {
            if ((s.t - center).norm() - cfg.radius).abs() < cfg.margin {
                return Err(Error::Precondition(format!("loop passes within {} of the divisor singularity t = {}", cfg.margin, s.t)));
            }
        }
        let (j, o) = (chart.chart, 1 - chart.chart);
        Ok(Self { a: Poly::from_series(&w.component(j)), b: Poly::from_series(&w.component(o)), chart: j, center, radius: cfg.radius })
    }

    fn point(&self, z: Complex64, t: Complex64) -> [Complex64; 2] {
        let mut p = [z, t];
        if self.chart == 1 {
            p.swap(0, 1);
        }
        p
    }

    /// `dz/dθ = −B/A · dt/dθ` along `t(θ)`.
    fn rhs(&self, theta: f64, z: Complex64) -> Complex64 {
        let e = Complex64::from_polar(self.radius, theta);
        let t = self.center + e;
        let dt = Complex64::i() * e;
        let p = self.point(z, t);
        -self.b.eval(&p) / self.a.eval(&p) * dt
    }

    /// Lifts the loop starting at `z₀`; `None` when `|z|` exceeds `10|z₀|`.
    pub fn transport(&self, z0: Complex64, cfg: &IntegratorConfig) -> Result<Option<Complex64>> {
        let field = ComplexField::new(1, |theta: f64, z: &[Complex64]| vec![self.rhs(theta, z[0])]);
        let bound = 10.0 * z0.norm();
        let mut st = Stepper::new(&field, 0.0, &[z0.re, z0.im], cfg)?;
        let end = 2.0 * PI;
        while st.t < end {
            match st.step(end) {
                Ok(s) => {
                    if s.y1[0].hypot(s.y1[1]) > bound {
                        return Ok(None);
                    }
                }
                Err(StepFailure::StepLimit) | Err(StepFailure::NonFinite) => return Ok(None),
                Err(f) => return Err(f.into()),
            }
        }
        Ok(Some(Complex64::new(st.y[0], st.y[1])))
    }
}

/// Polynomial least squares `h(x) ≈ Σ_{k=1}^{deg} a_k x^k`.
fn fit(samples: &[(Complex64, Complex64)], degree: usize) -> Result<(Vec<Complex64>, f64)> {
    let m = samples.len();
    let v = DMatrix::from_fn(m, degree, |i, k| samples[i].0.powu(k as u32 + 1));
    let rhs = DVector::from_iterator(m, samples.iter().map(|s| s.1));
    let coeffs = v
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Numerics(format!("least squares failed: {e}")))?;
    let residual = (&v * &coeffs - &rhs).iter().map(|r| r.norm()).fold(0.0, f64::max);
    Ok((coeffs.iter().cloned().collect(), residual))
}

/// Holonomy germ of the divisor along a loop, sampled on a fan of seeds.
pub fn holonomy_germ(chart: &BlowupChart, cfg: &HolonomyConfig) -> Result<HolonomyGerm> {
    let transport = LeafTransport::new(chart, cfg)?;
    let mut samples = Vec::new();
    let mut dropped = Vec::new();
    let mut defect: f64 = 0.0;
    for r in [1.0, 0.5, 0.25] {
        for k in 0..cfg.fan_angles {
            let angle = cfg.fan_rotation + 2.0 * PI * k as f64 / cfg.fan_angles as f64;
            let z0 = Complex64::from_polar(r * cfg.seed_radius, angle);
            match transport.transport(z0, &cfg.integrator)? {
                Some(h) => {
                    if let Some(hh) = transport.transport(h, &cfg.integrator)? {
                        defect = defect.max((hh - z0).norm());
                    }
                    samples.push((z0, h));
                }
                None => dropped.push(z0),
            }
        }
    }
    if samples.len() < 3 {
        return Err(Error::Numerics(format!("only {} seeds survived the loop", samples.len())));
    }
    let degree = cfg.fit_degree.clamp(1, samples.len() - 1);
    let (coefficients, fit_residual) = fit(&samples, degree)?;
    let a1 = coefficients[0];
    Ok(HolonomyGerm {
        samples,
        dropped,
        fit_residual,
        modulus: a1.norm(),
        argument: a1.arg(),
        coefficients,
        period_two_defect: defect,
    })
}
