//! Exact lattices of Plücker variables, straightening laws, generalized Hibi
//! ideals, interpolating chain-order polytopes, and the minimal H-descriptions
//! of the maximal Gröbner cones of the Plücker ideal attached to semistandard
//! and PBW-semistandard tableaux.

pub mod bitset;
pub mod cone;
pub mod error;
pub mod oracle;
pub mod order;
pub mod plucker;
pub mod poly;
pub mod polytope;
pub mod straighten;
pub mod suites;

pub use error::{Error, Result};
