//! Exact symbolic and numerical tools for (ε,η)-presented *-algebras:
//! noncommutative spheres, their quantum symmetry groups, and the
//! orthogonal/tuple-space variants.

pub mod ncalg;
pub mod presentations;
pub mod repmodels;
pub mod scalar;
pub mod verifier;

pub use scalar::Scalar;
