//! Structured eigenvalue perturbation bounds for block and tridiagonal
//! Hermitian matrices.

// `!(x > 0.0)` checks deliberately reject NaN; index loops mirror the math.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod aed;
pub mod blockbounds;
pub mod eigcore;
pub mod error;
pub mod logscalar;
pub mod multiexp;
pub mod tribounds;

pub use error::{Error, Result};
pub use logscalar::LogScalar;
