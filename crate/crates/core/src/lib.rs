//! Radial solver suite for normalized solutions of the symmetric two-component
//! cubic Schrodinger system on R^3.
//!
//! The system couples two radial profiles (u, v) through a cubic interaction
//! with coupling constant beta and prescribed L^2 masses. The crate provides
//!
//! * a truncated radial discretization with exact discrete integration by
//!   parts ([`grid`], [`field`]),
//! * the energy functional, the dilation fiber map and its closed-form
//!   projection onto the Pohozaev manifold, constrained gradients and the
//!   Hessian quadratic form ([`energy`], [`spectrum`]),
//! * scalar ground states via shooting plus grid Newton polish, and the
//!   explicit diagonal solution curve ([`scalar`]),
//! * constrained descent and Newton machinery that locates critical pairs,
//!   detects semitrivial collapse and constructs genus-style test sets
//!   ([`solve`]),
//! * continuation of solution branches in beta and phase-separation
//!   diagnostics ([`branch`]).

pub mod branch;
pub mod energy;
pub mod error;
pub mod field;
pub mod grid;
pub mod linalg;
pub mod problem;
pub mod scalar;
pub mod solve;
pub mod spectrum;

pub use error::{CnlsError, Result};
pub use field::RadialField;
pub use grid::RadialGrid;
pub use problem::{DiagnosticsBundle, ProblemParams, StatePair};
