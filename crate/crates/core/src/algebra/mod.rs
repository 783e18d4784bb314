//! Exact coefficient arithmetic and graded truncated power series.

pub mod linsolve;
pub mod monomial;
pub mod scalar;
pub mod series;

pub use monomial::{MultiIndex, MAX_VARS};
pub use scalar::{rat, rational_to_f64, serialize_rational, FieldTag, GaussianRational, Rational, Scalar};
pub use series::{check_order, pham, Composition, QSeries, Series, DEFAULT_ORDER, MAX_ORDER};
