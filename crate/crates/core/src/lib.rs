//! Identified sets, assumption lattices and misspecification-robust bounds.

// `!(a <= b)` is used on purpose so that NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amiv;
pub mod artstein;
pub mod binaryiv;
pub mod data;
pub mod error;
pub mod intersect;
pub mod lattice;
pub mod lp;
pub mod oracles;
pub mod setcore;

pub use error::{Error, Result};
