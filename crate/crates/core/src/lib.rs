//! Exact computer algebra for Mahler functional equations and k-regular
//! sequences.

pub mod algebra;
pub mod becker;
pub mod corpus;
pub mod error;
pub mod json;
pub mod mahler;
pub mod regular;
pub mod series;

pub use error::{Error, Result};
