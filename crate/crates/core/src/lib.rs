//! Finite-products sets over semigroups with retractions onto nice
//! subsemigroups, covering relations, and the bounded searches and
//! finite-semigroup algebra built on them.

pub mod algebra;
pub mod error;
pub mod fp;
pub mod instances;
pub mod search;
pub mod semigroup;

pub use error::{Error, Result};
pub use fp::{fp, fp_sigma, fp_sigma_minus, is_chain, Factor, FpSet, Provenance};
pub use semigroup::{CoveringRelation, Element, Morphism, MorphismKind, Semigroup, Subsemigroup};
