//! Exact combinatorics of B-stable ideals in root systems.
//!
//! The crate builds root systems of types A–G, enumerates their upper order
//! ideals and ideal exponents, and checks two factorizations attached to
//! each ideal: the Poincaré polynomial of its Weyl-type subsets, and the
//! characteristic polynomial of its hyperplane arrangement. All arithmetic is
//! exact.

pub mod arrangement;
mod error;
pub mod ideals;
pub mod macdonald;
pub mod par;
pub mod poly;
pub mod rootsys;
pub mod survey;
pub mod weylcomb;

pub use error::{Error, Result};
pub use par::Exec;
pub use poly::IntPolynomial;
pub use rootsys::{build_root_system, enumerate_weyl, CartanType, RootSet, RootSystem, WeylGroup};
