//! Exact computation of non-scalar automorphism groups of quantum tori via
//! the exterior-square representation of GL(n, Z), together with
//! linear-automorphism and admissible-permutation audits of multiparameter
//! quantum affine spaces.
//!
//! All arithmetic is exact: arbitrary-precision integers and rationals, or
//! prime-field residues. There is no floating point anywhere in this crate.

pub mod affine;
pub mod document;
pub mod error;
pub mod exterior;
pub mod field;
pub mod lambda;
pub mod matrix;
pub mod nonscalar;
pub mod orbits;
pub mod perm;
pub mod report;

pub use error::{Error, Result};
pub use exterior::{Bivector, PairIndex};
pub use lambda::{ExponentVector, MultiparamSpec, RelationsMatrix};
pub use matrix::{IntMatrix, SnfResult};
pub use perm::Permutation;
