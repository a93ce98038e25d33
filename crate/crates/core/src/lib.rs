//! Memory-weighted velocity operator with time-varying power-law memory.

// NaN-rejecting `!(x > 0.0)` guards are intentional throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::approx_constant, clippy::excessive_precision))]

pub mod error;
pub mod expr;
pub mod analysis;
pub mod appendix;
pub mod bounds;
pub mod cli;
pub mod grid;
pub mod kernel;
pub mod operator;
pub mod quadrature;
pub mod report;
pub mod schedule;
pub mod specfun;
pub mod trajectory;

pub use error::{Error, Result};
