//! Quadratic blow-up at the origin, tangent cones and the real surfaces used
//! for contact-order checks.
//!
//! Chart `j` keeps the variable `z_j` and replaces every other `x_i` by
//! `z_j·t_i`. In the chart the new variables keep their positions: index `j`
//! is `z_j` and index `i ≠ j` is `t_i`.

mod cone;
mod divisor;
mod surface;

use serde::Serialize;

use crate::algebra::{Composition, MultiIndex, QSeries, Rational, Series};
use crate::error::{Error, Result};
use crate::exterior::QForm;

pub use cone::{prime_power, tangent_cone, Irreducibility, TangentCone};
pub use divisor::{chart_transition_defect, divisor_singularities, DivisorSingularity};
pub use surface::{contact_order, realify, totally_real_surface, GSeries, ContactClass, ContactReport, RealSurface, TotallyRealSurfaceData};

#[derive(Clone, Debug, PartialEq)]
pub struct BlowupChart {
    pub chart: usize,
    /// `σ*ω` before dividing out the divisor.
    pub pullback: QForm,
    /// `σ*ω / z_j^k` with `k` maximal.
    pub strict_transform: QForm,
    /// The power `k` of `z_j` divided out.
    pub divisor_power: usize,
    pub dicritical: bool,
}

/// Images of the chart map `x_i ↦ z_j·t_i`, `x_j ↦ z_j`.
pub fn chart_map(nvars: usize, chart: usize, order: usize) -> Vec<QSeries> {
    (0..nvars)
        .map(|i| {
            let z = QSeries::var(nvars, chart, order);
            if i == chart {
                z
            } else {
                &z * &QSeries::var(nvars, i, order)
            }
        })
        .collect()
}

/// Divides every coefficient by `x_j^k`; the caller guarantees divisibility.
fn divide_by_power(s: &QSeries, j: usize, k: usize) -> QSeries {
    let terms = s.terms().map(|(m, c)| (m.with(j, m.get(j) - k as u32), c.clone()));
    Series::from_terms(s.nvars(), s.order().saturating_sub(k), terms.collect::<Vec<(MultiIndex, Rational)>>())
}

/// Blow-up chart `j` of `ω`, with the strict transform.
///
/// A monomial of degree `D` becomes `z^D·t^α`, so the pullback stays known
/// through total degree `N`; dividing by `z^k` lowers that to `N − k`.
pub fn blowup(omega: &QForm, chart: usize) -> Result<BlowupChart> {
    let n = omega.nvars();
    if chart >= n {
        return Err(Error::IndexOutOfRange { index: chart, nvars: n });
    }
    if omega.is_zero() {
        return Err(Error::ZeroForm);
    }
    if omega.degree() != 1 {
        return Err(Error::UnsupportedDegree(omega.degree()));
    }
    if omega.valuation() == Some(0) {
        return Err(Error::Precondition("ω must vanish at the origin".into()));
    }
    let images = chart_map(n, chart, omega.order() + 1);
    let pullback = omega.pullback(&images, Composition::Strict)?.truncated(omega.order());
    let power = pullback
        .iter()
        .flat_map(|(_, c)| c.terms().map(|(m, _)| m.get(chart) as usize))
        .min()
        .ok_or(Error::ZeroForm)?;
    let comps = pullback
        .components()
        .iter()
        .map(|c| divide_by_power(c, chart, power))
        .collect();
    let strict_transform = QForm::one_form(comps)?;
    let dicritical = tangent_cone(omega)?.dicritical;
    Ok(BlowupChart { chart, pullback, strict_transform, divisor_power: power, dicritical })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartSummary {
    pub chart: usize,
    pub divisor_power: usize,
    pub dicritical: bool,
    pub strict_transform: String,
}

impl From<&BlowupChart> for ChartSummary {
    fn from(c: &BlowupChart) -> Self {
        Self {
            chart: c.chart,
            divisor_power: c.divisor_power,
            dicritical: c.dicritical,
            strict_transform: c.strict_transform.to_string(),
        }
    }
}
