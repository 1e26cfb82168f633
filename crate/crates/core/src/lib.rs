//! Core combinatorics and geometry of witch curves.
//!
//! Rooted ribbon trees, tree-pairs and their posets, exact points of the
//! compactified moduli spaces, Gromov limits of Laurent families, and the
//! approximate distance functionals. Everything here is `no_std` with `alloc`.

#![no_std]

extern crate alloc;

pub mod error;
pub mod laurent;
pub mod limits;
pub mod metric;
pub mod moduli;
pub mod number;
pub mod optimize;
pub mod strata;
pub mod treepair;
pub mod trees;

pub use error::{Error, Result};
pub use laurent::{Laurent, RatFn};
pub use number::{Extended, Point2, Rational};
