use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use crate::algebra::QSeries;
use crate::error::{Error, Result};
use crate::exterior::QForm;
use crate::first_integral::dual_field;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
    /// Time tolerance for locating section crossings.
    pub event_tol: f64,
    /// Trajectories leaving this ball count as escaped.
    pub max_radius: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, max_step: 0.1, max_steps: 200_000, event_tol: 1e-11, max_radius: 1.0 }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.rtol, self.atol, self.max_step, self.event_tol, self.max_radius];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) || self.max_steps == 0 {
            return Err(Error::Precondition("integrator tolerances and limits must be positive".into()));
        }
        Ok(())
    }
}

/// Right-hand side `y' = F(t, y)`.
pub trait VectorField {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, y: &[f64], out: &mut [f64]);
}

/// Closure-backed field.
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64])> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(f64, &[f64], &mut [f64])> VectorField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, t: f64, y: &[f64], out: &mut [f64]) {
        (self.f)(t, y, out)
    }
}

/// Complex system `z' = F(t, z)` in `n` variables, integrated as the real
/// system `(Re z₁, Im z₁, …)`.
pub struct ComplexField<F> {
    n: usize,
    f: F,
}

impl<F: Fn(f64, &[Complex64]) -> Vec<Complex64>> ComplexField<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F: Fn(f64, &[Complex64]) -> Vec<Complex64>> VectorField for ComplexField<F> {
    fn dim(&self) -> usize {
        2 * self.n
    }

    fn eval(&self, t: f64, y: &[f64], out: &mut [f64]) {
        let z: Vec<Complex64> = y.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        for (k, v) in (self.f)(t, &z).into_iter().enumerate() {
            out[2 * k] = v.re;
            out[2 * k + 1] = v.im;
        }
    }
}

/// Autonomous real polynomial field built from exact series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesField {
    components: Vec<Poly>,
    /// `∂X_i/∂x_j` at the origin.
    pub linear: Vec<Vec<f64>>,
}

impl SeriesField {
    pub fn new(field: &[QSeries]) -> Result<Self> {
        let n = field.len();
        if n == 0 || field.iter().any(|c| c.nvars() != n) {
            return Err(Error::Structural("field needs one component per variable".into()));
        }
        let linear = field
            .iter()
            .map(|c| {
                (0..n)
                    .map(|j| crate::algebra::rational_to_f64(&c.coeff(&crate::algebra::MultiIndex::var(j))))
                    .collect()
            })
            .collect();
        Ok(Self { components: field.iter().map(Poly::from_series).collect(), linear })
    }

    /// The dual field `b∂x − a∂y` of a planar form `a dx + b dy`.
    pub fn from_form(omega: &QForm) -> Result<Self> {
        Self::new(&dual_field(omega)?)
    }

    pub fn at(&self, y: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval_real(y)).collect()
    }
}

impl VectorField for SeriesField {
    fn dim(&self) -> usize {
        self.components.len()
    }

    fn eval(&self, _t: f64, y: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.eval_real(y);
        }
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Continuous extension of order 4.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepFailure {
    StepLimit,
    Underflow,
    NonFinite,
}

impl From<StepFailure> for Error {
    fn from(f: StepFailure) -> Self {
        Error::Integration(
            match f {
                StepFailure::StepLimit => "step limit exceeded",
                StepFailure::Underflow => "step size underflow",
                StepFailure::NonFinite => "non-finite state",
            }
            .into(),
        )
    }
}

/// One accepted step with its dense output.
#[derive(Clone, Debug)]
pub struct Step {
    pub t0: f64,
    pub t1: f64,
    pub y0: Vec<f64>,
    pub y1: Vec<f64>,
    cont: [Vec<f64>; 5],
}

impl Step {
    /// Dense output at `t ∈ [t0, t1]`.
    pub fn interpolate(&self, t: f64) -> Vec<f64> {
        let h = self.t1 - self.t0;
        let s = if h == 0.0 { 0.0 } else { (t - self.t0) / h };
        let s1 = 1.0 - s;
        let [r1, r2, r3, r4, r5] = &self.cont;
        (0..r1.len()).map(|i| r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])))).collect()
    }
}

/// Adaptive stepper with PI step-size control.
pub struct Stepper<'a, F: VectorField + ?Sized> {
    field: &'a F,
    cfg: IntegratorConfig,
    pub t: f64,
    pub y: Vec<f64>,
    k1: Vec<f64>,
    h: f64,
    facold: f64,
    pub accepted: usize,
    pub rejected: usize,
}

impl<'a, F: VectorField + ?Sized> Stepper<'a, F> {
    pub fn new(field: &'a F, t0: f64, y0: &[f64], cfg: &IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        if y0.len() != field.dim() {
            return Err(Error::Structural(format!("state of dimension {} for a field of dimension {}", y0.len(), field.dim())));
        }
        let mut k1 = vec![0.0; y0.len()];
        field.eval(t0, y0, &mut k1);
        let scale = |v: &[f64]| {
            let sum: f64 = v.iter().zip(y0).map(|(a, y)| (a / (cfg.atol + cfg.rtol * y.abs())).powi(2)).sum();
            (sum / v.len() as f64).sqrt()
        };
        let (d0, d1) = (scale(y0), scale(&k1));
        let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        Ok(Self {
            field,
            cfg: *cfg,
            t: t0,
            y: y0.to_vec(),
            k1,
            h: h.min(cfg.max_step),
            facold: 1e-4,
            accepted: 0,
            rejected: 0,
        })
    }

    /// Takes one accepted step, never passing `t_end`.
    pub fn step(&mut self, t_end: f64) -> std::result::Result<Step, StepFailure> {
        let n = self.y.len();
        let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
        let mut tmp = vec![0.0; n];
        loop {
            if self.accepted + self.rejected >= self.cfg.max_steps {
                return Err(StepFailure::StepLimit);
            }
            let mut h = self.h.min(self.cfg.max_step);
            let last = self.t + h >= t_end;
            if last {
                h = t_end - self.t;
            }
            if h <= 1e-14 * self.t.abs().max(1.0) {
                return Err(StepFailure::Underflow);
            }
            k[0].clone_from(&self.k1);
            for s in 1..7 {
                for i in 0..n {
                    tmp[i] = self.y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
                }
                let (_, rest) = k.split_at_mut(s);
                self.field.eval(self.t + C[s] * h, &tmp, &mut rest[0]);
            }
            // Stage 7 is evaluated at the new point, so `tmp` now holds y1.
            let y1 = tmp.clone();
            let mut err = 0.0;
            for i in 0..n {
                let e = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
                let sk = self.cfg.atol + self.cfg.rtol * self.y[i].abs().max(y1[i].abs());
                err += (e / sk).powi(2);
            }
            let err = (err / n as f64).sqrt();
            if !err.is_finite() || y1.iter().any(|v| !v.is_finite()) {
                self.h = h * 0.1;
                self.rejected += 1;
                if self.h <= 1e-14 * self.t.abs().max(1.0) {
                    return Err(StepFailure::NonFinite);
                }
                continue;
            }
            const BETA: f64 = 0.04;
            const SAFE: f64 = 0.9;
            let fac11 = err.powf(0.2 - 0.75 * BETA);
            if err <= 1.0 {
                let fac = (fac11 / self.facold.powf(BETA) / SAFE).clamp(0.1, 5.0);
                self.facold = err.max(1e-4);
                let cont = self.dense(h, &y1, &k);
                let step = Step { t0: self.t, t1: if last { t_end } else { self.t + h }, y0: self.y.clone(), y1: y1.clone(), cont };
                self.t = step.t1;
                self.y = y1;
                self.k1.clone_from(&k[6]);
                self.h = h / fac;
                self.accepted += 1;
                return Ok(step);
            }
            self.h = h / (fac11 / SAFE).min(5.0);
            self.rejected += 1;
        }
    }

    fn dense(&self, h: f64, y1: &[f64], k: &[Vec<f64>; 7]) -> [Vec<f64>; 5] {
        let n = y1.len();
        let mut r: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
        for i in 0..n {
            let dy = y1[i] - self.y[i];
            let bspl = h * k[0][i] - dy;
            r[0][i] = self.y[i];
            r[1][i] = dy;
            r[2][i] = bspl;
            r[3][i] = dy - h * k[6][i] - bspl;
            r[4][i] = h * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>();
        }
        r
    }
}

/// Single explicit step of the 5th-order formula from `(t0, y0)` over `h`,
/// used to land exactly on a located event.
pub fn single_step<F: VectorField + ?Sized>(field: &F, t0: f64, y0: &[f64], h: f64) -> Vec<f64> {
    let n = y0.len();
    let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
    field.eval(t0, y0, &mut k[0]);
    let mut tmp = vec![0.0; n];
    for s in 1..7 {
        for i in 0..n {
            tmp[i] = y0[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
        }
        let (_, rest) = k.split_at_mut(s);
        field.eval(t0 + C[s] * h, &tmp, &mut rest[0]);
    }
    tmp
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub accepted: usize,
    pub rejected: usize,
}

impl Trajectory {
    pub fn end(&self) -> &[f64] {
        self.states.last().expect("trajectory holds its start")
    }
}

/// Integrates `y' = F(t, y)` from `t0` to `t1 > t0`.
pub fn integrate<F: VectorField + ?Sized>(field: &F, t0: f64, y0: &[f64], t1: f64, cfg: &IntegratorConfig) -> Result<Trajectory> {
    if t1 <= t0 {
        return Err(Error::Precondition("integration runs forward in time".into()));
    }
    let mut st = Stepper::new(field, t0, y0, cfg)?;
    let mut traj = Trajectory { times: vec![t0], states: vec![y0.to_vec()], accepted: 0, rejected: 0 };
    while st.t < t1 {
        let s = st.step(t1)?;
        traj.times.push(s.t1);
        traj.states.push(s.y1);
    }
    traj.accepted = st.accepted;
    traj.rejected = st.rejected;
    Ok(traj)
}
