//! Exact arithmetic for degree growth of dominant rational self-maps.
//!
//! The crate computes per-iterate degrees, dynamical degrees and relative
//! dynamical degrees for monomial self-maps of `P^k`, general rational
//! self-maps of `P^k`, products, and coordinate skew products over a
//! fibration, and verifies the product formula
//! `d_p(f) = max_j d_j(g) * d_{p-j}(f|pi)` together with its corollaries.
//!
//! All degree data is exact: integer degree sequences use arbitrary
//! precision, cohomology pairings use exact rationals, and dynamical
//! degrees are eigenvalue products carried with at least 12 correct digits.

pub mod cohomology;
pub mod error;
pub mod fibered;
pub mod matrix;
pub mod monomial;
pub mod mpoly;
pub mod parser;
pub mod polytope;
pub mod profile;
pub mod ratmap;
pub mod roots;

pub use error::{Error, Result};
