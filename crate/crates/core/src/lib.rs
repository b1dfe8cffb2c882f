//! Pointing-error and end-to-end channel laws for directional mmWave/THz links between
//! vibrating nodes, with the Monte-Carlo oracle used to validate them.

// `!(x > 0.0)` is deliberate: it rejects NaN with the same test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Coefficient tables are kept digit-for-digit as published.
#![allow(clippy::excessive_precision)]

pub mod antenna;
pub mod channel;
pub mod config;
pub mod distribution;
pub mod error;
pub mod montecarlo;
pub mod output;
pub mod pointing;
pub mod specfun;
pub mod tables;
pub mod validate;

pub use distribution::Distribution;
pub use error::{Error, Result};
