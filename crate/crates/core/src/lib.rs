//! Haar-distributed orthogonal submatrices compared against i.i.d. Gaussian
//! matrices.
//!
//! The upper-left `p × q` block `Z` of a uniformly distributed `n × n`
//! orthogonal matrix, scaled by `√n`, is close in law to a `p × q` block `G`
//! of independent standard normals when `pq/n` is small (total variation,
//! Hellinger, Kullback–Leibler) or when `pq²/n` is small (pathwise, under the
//! Gram–Schmidt coupling). This crate provides:
//!
//! - [`numerics`]: counter-based random streams, special functions, small
//!   dense factorizations and goodness-of-fit statistics.
//! - [`sampling`]: Gaussian blocks, chi-square variates, Haar submatrices and
//!   the Gram–Schmidt coupled pair.
//! - [`moments`]: exact rational moment formulas.
//! - [`density`]: log-space likelihood ratio `f/g` between the two laws.
//! - [`distances`]: Monte Carlo estimators of TV, KL and Hellinger distance.
//! - [`limits`]: Hilbert–Schmidt coupling experiments, the trace CLT and
//!   eigenvalue concentration.
//! - [`cli`]: configuration, scheduling and result emission for the
//!   `haargauss` binary.

// `!(x > 0.0)` style guards are used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod density;
pub mod distances;
pub mod error;
pub mod limits;
pub mod moments;
pub mod numerics;
pub mod sampling;

pub use error::{Error, Result};
pub use numerics::{RealMatrix, RngStream};
pub use sampling::Dims;
