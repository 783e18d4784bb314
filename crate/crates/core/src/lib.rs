//! Truncated-order symbolic and numeric tools for germs of integrable one-forms:
//! first integrals `ω = g·df`, focal values, blow-ups, holonomy and return maps.

pub mod algebra;
pub mod error;

pub use error::{Error, Result};
pub mod exterior;
pub mod random;
pub mod first_integral;
pub mod blowup;
pub mod numerics;
pub mod harness;
