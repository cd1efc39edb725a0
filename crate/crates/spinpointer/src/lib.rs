//! Weak collective-spin measurements with a three-dimensional Gaussian pointer.

// `!(x > 0.0)` is used on purpose so that NaN is rejected along with the other bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod disturbance;
pub mod error;
pub mod estimation;
pub mod pointer;
pub mod quadrature;
pub mod special;
pub mod spin;

pub use error::{Error, Result};
