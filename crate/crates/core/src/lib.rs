//! Exact combinatorics and non-archimedean arithmetic for dual intersection
//! complexes of poly-stable pairs and extended skeletons of standard pairs.
//!
//! Everything is computed with exact rational arithmetic; infinity is a
//! symbol, never a float. The crate is organized bottom-up:
//!
//! - [`rat`]: nonnegative rationals extended by infinity;
//! - [`polysimplex`]: the category of extended colored poly-simplices;
//! - [`geometry`]: geometric realizations and affine linear functions;
//! - [`strata`]: stratification descriptors of poly-stable pairs;
//! - [`complex`]: canonical polyhedra, the strict dual complex, descent;
//! - [`field`]: the exact valued coefficient field (finite t-power sums);
//! - [`skeleton`]: seminorms, tropicalization, retraction and the
//!   deformation flow on standard pairs.

pub mod error;
pub mod rat;
pub mod polysimplex;
pub mod geometry;
pub mod strata;
pub mod complex;
pub mod field;
pub mod skeleton;

pub use error::{Error, Result};
