//! Pointwise branching curves of four-dimensional Riemannian manifolds.
//!
//! The curvature tensor at a point, written in an orthonormal frame, is split
//! into self-dual and anti-self-dual blocks. Restricting the curvature quadric
//! to the pencils of tangent lines of the metric quadric gives a quadratic
//! equation whose discriminant is a bidegree (4,4) curve in P¹×P¹. This crate
//! computes that curve exactly, classifies it, and tracks it along the closed
//! form Ricci flows of the standard model geometries and their parabolic
//! blow-ups.
//!
//! Module map:
//!
//! * [`tensor`]: frame components, symmetry checks, Ricci contraction,
//!   Kulkarni–Nomizu product and the block decomposition.
//! * [`bivector`]: Segre and Plücker maps, the self-dual basis, ruling
//!   parametrisations and the three quadratic forms.
//! * [`curve`]: pencil quadratic, coefficient expansion, evaluation,
//!   classification and the two-path oracle.
//! * [`chart`]: affine charts and real-slice sampling.
//! * [`singular`]: numeric scan for singular points of a curve.
//! * [`flow`]: model geometries, closed form flows and blow-up sequences.

pub mod bivector;
pub mod chart;
pub mod curve;
mod error;
pub mod exec;
pub mod flow;
mod poly;
pub mod sampling;
pub mod singular;
pub mod tensor;

pub use error::{Error, Result};
pub use exec::ExecMode;

/// Complex scalar used for all projective coordinates.
pub type C64 = num_complex::Complex64;
