//! Exact subgroup counting for Z_m1 x Z_m2 and the census of those counts over
//! pairs whose product m1 m2 is a perfect square or cube, together with the
//! numeric machinery (zeta values, Euler products, pole residues) that produces
//! the main-term constants of the census growth, and fitting/validation tools
//! that measure how well the constants explain exact census data.
//!
//! Start with the runnable programs under `examples/`, or the `subgroup-census`
//! binary for the batch pipelines.

pub mod arith;
pub mod census;
pub mod error;
pub mod euler;
pub mod fit;
pub mod mp;
pub mod residue;
pub mod series;
pub mod zeta;

pub use error::{Error, Result};
