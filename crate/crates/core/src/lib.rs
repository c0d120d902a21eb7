//! Exact-arithmetic equivariant volumes for linearized torus and SU(2)
//! actions on products of projective spaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: groups, projective factors, linearized bundles, scenarios.
//! - [`lattice`]: small integer lattice helpers (Smith normal form).
//! - [`multiplicity`]: exact isotypic section counts by generating-function
//!   convolution, plus [`oracle`], an independent brute-force enumerator.
//! - [`asymptotics`]: G-semigroups, G-exponents and equivariant volumes via
//!   exact quasi-polynomial fitting.
//! - [`geometry`]: moment images, stability, generic stabilizers, associated
//!   characters and the closed-form volume predictor.

pub mod asymptotics;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod model;
pub mod multiplicity;
pub mod oracle;

pub use error::{Error, Result};
pub use model::{
    FactorWeights, GroupKind, GroupSpec, LinearizedBundle, ProjectiveFactor, Rational, Scenario,
    Weight,
};
