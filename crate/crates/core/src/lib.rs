//! Five-dimensional Weyl-integrable gravity and the cosmology it induces on a
//! four-dimensional brane.
//!
//! * [`numerics`]: jets for exact derivatives and an adaptive RK integrator.
//! * [`geometry`]: Christoffel symbols, Riemann/Ricci/Einstein tensors, Weyl connection.
//! * [`weyl`]: Weyl frames, compatibility, frame changes and bulk field-equation residuals.
//! * [`cosmology`]: the warped bulk model and its power-law solutions.
//! * [`brane`]: induced metric, induced stress-energy, Λ(t) and the effective fluid.

pub mod brane;
pub mod cosmology;
pub mod geometry;
pub mod numerics;
pub mod report;
pub mod weyl;
