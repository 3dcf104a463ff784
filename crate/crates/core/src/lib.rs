//! Numerical laboratory for positive solutions of
//! `−ε²Δu + |x|^α u = |x|^α u^p` on an annulus of `R^{2N+2}` with Neumann
//! data, studied through the `S¹`-reduction to the warped product
//! `I' ×_f CP^N` and its boundary-spike solutions.
//!
//! All numerics are generic over [`Real`]; the `*64` aliases below fix the
//! scalar to `f64`, which every tolerance in the test-suite assumes.

// Negated comparisons reject NaN inputs along with out-of-range ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expansion;
pub mod geometry;
pub mod ground_state;
pub mod hopf;
pub mod nonlinear;
pub mod ode;
pub mod profile;
pub mod quadrature;
pub mod scalar;
pub mod solver;
pub mod spline;

pub use error::{Error, Result};
pub use geometry::{ProblemParams, ReducedGeometry, Side};
pub use profile::{ModalProfile, RadialFunction, RadialProfile};
pub use scalar::Real;

pub type ProblemParams64 = ProblemParams<f64>;
pub type ReducedGeometry64 = ReducedGeometry<f64>;
pub type RadialProfile64 = RadialProfile<f64>;
pub type SolutionField64 = solver::SolutionField<f64>;
pub type MpResult64 = solver::MpResult<f64>;
