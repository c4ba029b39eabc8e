//! Arithmetic in Artin-Schreier towers over prime finite fields.

pub mod basefield;
pub mod embedding;
pub mod error;
pub mod frobtrace;
pub mod isomorphism;
pub mod oracle;
pub mod towerbuild;
pub mod towerops;

pub use error::{Error, Result};
