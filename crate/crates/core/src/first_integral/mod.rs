//! Formal first integrals `ω = g·df` solved degree by degree.
//!
//! The solver works on homogeneous stages. At coefficient degree `m` the
//! unknowns are `f_{m+1}` and `g_{m−ν}`, and the equation is linear:
//!
//! ```text
//! ω_m − Σ_{j=1}^{m−ν−1} g_j·df_{m+1−j} = df_{m+1} + g_{m−ν}·dQ
//! ```
//!
//! Contracting with the Euler field gives `f_{m+1}` in terms of `g_{m−ν}`, so
//! only the `g` unknowns enter the exact elimination.

mod lie;
mod morse;
mod restrict;
mod solver;

use serde::Serialize;

use crate::algebra::{QSeries, Rational};
use crate::exterior::QForm;

pub use lie::{
    center_form, circle_average, dual_field, dual_form, lie_obstructions, solve_lie, LieStage,
};
pub use morse::{morse_normalize, CoordinateChange};
pub use restrict::{complexify_restrict_commutes, restrict_hyperplane};
pub use solver::{align_gauge, focal_values_from_obstructions, solve_gdf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Solved,
    Obstructed,
}

/// First stage whose linear system is inconsistent.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    /// Coefficient degree `m` of the failing stage; `f_{m+1}` is the missing term.
    pub degree: usize,
    /// Homogeneous 1-form `ω_m − (g·df)_m` left over after the best stage solve.
    pub residual: QForm,
    /// Coordinates of the residual on the canonical complement of the stage
    /// image, in ascending `(component, monomial)` order.
    pub focal_values: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstIntegralOutcome {
    pub status: Status,
    /// `f = Q + …`, through degree `N + 1` when solved. When obstructed it holds
    /// the terms fixed by the stages that succeeded.
    pub f: QSeries,
    /// `g = 1 + …`, through degree `N − ν` when solved.
    pub g: QSeries,
    pub obstruction: Option<Obstruction>,
    /// `ω − g·df` recomputed from scratch vanishes through order `N`.
    pub residual_is_zero: bool,
    pub order: usize,
}

impl FirstIntegralOutcome {
    pub fn is_solved(&self) -> bool {
        self.status == Status::Solved
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FocalMethod {
    SolverObstruction,
    LyapunovRecursion,
    ReturnmapFit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FocalValue {
    /// `2k` for `V_{2k}`.
    pub index: usize,
    #[serde(serialize_with = "crate::algebra::serialize_rational")]
    pub value: Rational,
    /// Set on values that follow an earlier nonzero one: they are defined only
    /// modulo the earlier obstructions.
    pub conditional: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FocalValueSequence {
    pub method: FocalMethod,
    pub values: Vec<FocalValue>,
}

impl FocalValueSequence {
    pub(crate) fn new(method: FocalMethod, raw: Vec<(usize, Rational)>) -> Self {
        let mut seen = false;
        let values = raw
            .into_iter()
            .map(|(index, value)| {
                let conditional = seen;
                seen |= !num_traits::Zero::is_zero(&value);
                FocalValue { index, value, conditional }
            })
            .collect();
        Self { method, values }
    }

    pub fn first_nonzero(&self) -> Option<&FocalValue> {
        self.values.iter().find(|v| !num_traits::Zero::is_zero(&v.value))
    }

    pub fn all_zero(&self) -> bool {
        self.first_nonzero().is_none()
    }

    pub fn get(&self, index: usize) -> Option<&Rational> {
        self.values.iter().find(|v| v.index == index).map(|v| &v.value)
    }
}

#[cfg(test)]
mod tests;
