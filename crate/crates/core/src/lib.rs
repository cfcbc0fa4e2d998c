//! Exact-arithmetic workbench for minimal models of equivariant cohomology.
//!
//! The pipeline: a finite-dimensional graded complex with contraction
//! operators ([`equivariant::EquivariantDatum`]) gets a Hodge package
//! ([`hodge`]), which feeds the perturbation operators on the
//! weight-truncated polynomial module ([`equivariant::TruncatedModule`]).
//! From those, [`model`] builds the minimal model with its transferred
//! differential, verifies the operator identities relating it to the
//! brute-force computation, and evaluates canonical extensions and twisted
//! products. [`fixed_point`] carries the separate symmetric-function
//! calculus for circle actions on projective space. Everything is exact
//! over arbitrary-precision rationals; every check is an equality.

pub mod complex;
pub mod equivariant;
pub mod error;
pub mod fixed_point;
pub mod fixtures;
pub mod hodge;
pub mod io;
pub mod matrix;
pub mod model;
pub mod rational;
pub mod report;
pub mod variants;

pub use complex::GradedComplex;
pub use equivariant::{
    Contraction, EquivariantDatum, ModuleElement, Monomial, ProductTable, TruncatedModule,
};
pub use error::{Error, Result};
pub use fixed_point::{CoefficientVector, Component, FixedPointData};
pub use hodge::HodgeData;
pub use matrix::RatMatrix;
pub use model::{CohomologyTable, MinimalModel};
pub use rational::Rat;
pub use report::Report;
