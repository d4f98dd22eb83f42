//! Constrained surface evolution in the Poincaré ball model of hyperbolic
//! 3-space, aimed at the isoperimetric problem inside the fundamental eighth
//! of the non-ideal cube that tiles H³ with dihedral angle 2π/5.
//!
//! The crate is organised bottom-up:
//!
//! * [`hyperbolic`]: metric, cell constants, isometries, closed-form families.
//! * [`mesh`]: triangulated surfaces with constraint bindings and CLEAR facets.
//! * [`functionals`]: hyperbolic area and flux volume with exact gradients.
//! * [`evolve`]: area minimisation at fixed volume with free boundaries.
//! * [`candidates`]: initial surfaces for every topological case.
//! * [`sweep`]: V×A sweeps, isop-curve, turning points, gaps, validation.

pub mod candidates;
pub mod error;
pub mod evolve;
pub mod functionals;
pub mod hyperbolic;
pub mod mesh;
pub mod quadrature;
pub mod sweep;

pub use error::{Error, Result};

/// Euclidean chart vector.
pub type Vec3 = nalgebra::Vector3<f64>;
