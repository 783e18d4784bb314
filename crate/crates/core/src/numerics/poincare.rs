use serde::{Deserialize, Serialize};

use super::ode::{single_step, IntegratorConfig, SeriesField, StepFailure, Stepper, VectorField};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReturnStatus {
    Returned,
    Escaped,
    StepLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnMapSample {
    pub x0: f64,
    pub x_return: Option<f64>,
    /// `x_return − x₀`.
    pub displacement: Option<f64>,
    pub transit_time: Option<f64>,
    pub status: ReturnStatus,
}

impl ReturnMapSample {
    fn failed(x0: f64, status: ReturnStatus) -> Self {
        Self { x0, x_return: None, displacement: None, transit_time: None, status }
    }
}

/// `+1` for counterclockwise rotation, `−1` for clockwise.
pub(crate) fn orientation(field: &SeriesField) -> Result<f64> {
    if field.dim() != 2 {
        return Err(Error::Precondition("return map needs a planar field".into()));
    }
    if field.at(&[0.0, 0.0]).iter().any(|v| *v != 0.0) {
        return Err(Error::Precondition("field must vanish at the origin".into()));
    }
    let l = &field.linear;
    let (tr, det) = (l[0][0] + l[1][1], l[0][0] * l[1][1] - l[0][1] * l[1][0]);
    if tr * tr - 4.0 * det >= 0.0 {
        return Err(Error::Precondition("linear part is not of rotation type".into()));
    }
    Ok(l[1][0].signum())
}

/// First return to the positive x-axis starting from `(x₀, 0)`.
///
/// The crossing is bracketed on the dense output, bisected in time to the
/// event tolerance, and then reached with one explicit step from the start of
/// the bracketing step.
pub fn poincare_return(field: &SeriesField, x0: f64, cfg: &IntegratorConfig) -> Result<ReturnMapSample> {
    let sense = orientation(field)?;
    if !(x0 > 0.0 && x0 < cfg.max_radius) {
        return Err(Error::Precondition(format!("x0 = {x0} must lie in (0, {})", cfg.max_radius)));
    }
    let mut st = Stepper::new(field, 0.0, &[x0, 0.0], cfg)?;
    loop {
        let step = match st.step(f64::INFINITY) {
            Ok(s) => s,
            Err(StepFailure::StepLimit) => return Ok(ReturnMapSample::failed(x0, ReturnStatus::StepLimit)),
            Err(f) => return Err(f.into()),
        };
        if step.y1[0].hypot(step.y1[1]) > cfg.max_radius {
            return Ok(ReturnMapSample::failed(x0, ReturnStatus::Escaped));
        }
        let (g0, g1) = (sense * step.y0[1], sense * step.y1[1]);
        if !(g0 < 0.0 && g1 >= 0.0) {
            continue;
        }
        let (mut lo, mut hi) = (step.t0, step.t1);
        while hi - lo > cfg.event_tol {
            let mid = 0.5 * (lo + hi);
            if sense * step.interpolate(mid)[1] < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t_star = 0.5 * (lo + hi);
        let y = single_step(field, step.t0, &step.y0, t_star - step.t0);
        if y[0] <= 0.0 {
            continue;
        }
        return Ok(ReturnMapSample {
            x0,
            x_return: Some(y[0]),
            displacement: Some(y[0] - x0),
            transit_time: Some(t_star),
            status: ReturnStatus::Returned,
        });
    }
}
