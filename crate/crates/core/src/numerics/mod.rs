//! Double-precision checks: an adaptive Dormand–Prince integrator, planar
//! return maps, holonomy of the exceptional divisor and parabolic orbits.

mod holonomy;
mod ode;
mod parabolic;
mod poincare;
mod poly;
mod probe;

pub use holonomy::{holonomy_germ, HolonomyConfig, HolonomyGerm, LeafTransport};
pub use ode::{integrate, single_step, ComplexField, FnField, IntegratorConfig, SeriesField, Step, StepFailure, Stepper, Trajectory, VectorField};
pub use parabolic::{parabolic_orbit_demo, OrbitVerdict, ParabolicClass};
pub use poincare::{poincare_return, ReturnMapSample, ReturnStatus};
pub use poly::Poly;
pub use probe::{leaf_closedness_probe, noise_floor, ClosednessProbe, LeafVerdict, ProbeResult};
