//! Deterministic numerical primitives shared by the rest of the crate.

pub mod linalg;
pub mod rng;
pub mod special;
pub mod stats;

pub use linalg::{cholesky_logdet, symmetric_eigen, LogDet, RealMatrix, SymmetricEigen};
pub use rng::RngStream;
pub use special::{log_gamma, log_gamma_diff, normal_cdf, normal_pdf};
pub use stats::{ks_statistic, mean_and_std_error, pairwise_sum, Histogram};

use crate::error::Result;
use rayon::prelude::*;

/// Runs `f(i)` for `i in 0..replicates` on the current rayon pool and returns
/// the results in index order.
pub fn par_replicates<T, F>(replicates: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    (0..replicates as u64).into_par_iter().map(f).collect()
}
