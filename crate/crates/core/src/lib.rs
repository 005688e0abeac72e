//! Numerical verification of first-order differential subordinations for
//! analytic functions whose first free coefficient is fixed.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admissibility;
pub mod classes;
pub mod error;
pub mod expressions;
pub mod harness;
pub mod hunter;
pub mod series;
pub mod subordination;
pub mod thresholds;

pub use error::{Error, Result};
