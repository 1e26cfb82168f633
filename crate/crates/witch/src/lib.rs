//! File formats, parallel poset construction, random corpora and the `witch` command line
//! on top of `witch-core`.

pub mod cli;
pub mod corpus;
pub mod dot;
pub mod error;
pub mod format;
pub mod parallel;

pub use error::{Result, WitchError};
