//! Betti categories, lub-categories and multigraded free resolutions of toric
//! rings `k[Q]` for pointed affine semigroups `Q ⊆ Z^r`.

pub mod betti;
pub mod cli;
pub mod error;
pub mod field;
pub mod fincat;
pub mod homology;
pub mod resolution;
pub mod semigroup;

pub use betti::{betti_category, betti_table, const_betti_table, cross_validate, BettiTable, CrossValidation};
pub use error::{Error, Result};
pub use field::FieldSpec;
pub use fincat::{find_isomorphism, CategoryIso, FiniteCategory};
pub use resolution::{bar_complex, minimize, transport_resolution, verify_resolution, GradedFreeComplex};
pub use semigroup::{AffineSemigroup, Degree, Monomial};
