//! Monte Carlo estimates of the total variation, Kullback–Leibler and
//! Hellinger distances between the laws of `√n Z` and `G`.
//!
//! Replicate `i` draws from `RngStream::new(seed, i)`; per-replicate values
//! are collected in index order and reduced with a fixed pairwise tree, so an
//! estimate depends only on `(dims, N, seed)`.
//!
//! Total variation carries the factor 2: `TV = ∫|f − g| ∈ [0, 2]`.

use crate::density::{KnMode, LogRatio, RatioEvaluator};
use crate::error::{Error, Result};
use crate::numerics::{mean_and_std_error, normal_cdf, par_replicates, symmetric_eigen, RngStream};
use crate::sampling::{sample_gaussian_matrix, sample_haar_submatrix, Dims};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DistanceKind {
    #[serde(rename = "tv")]
    Tv,
    #[serde(rename = "kl")]
    Kl,
    #[serde(rename = "hellinger")]
    Hellinger,
}

impl DistanceKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tv" => Ok(Self::Tv),
            "kl" => Ok(Self::Kl),
            "hellinger" | "h" => Ok(Self::Hellinger),
            other => Err(Error::Config(format!(
                "unknown distance kind {other:?} (expected tv, kl or hellinger)"
            ))),
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Tv => "tv",
            Self::Kl => "kl",
            Self::Hellinger => "hellinger",
        })
    }
}

/// A Monte Carlo mean with its standard error.
///
/// For [`DistanceKind::Hellinger`] the mean is `H²`; see
/// [`EstimateWithError::hellinger`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateWithError {
    pub mean: f64,
    pub std_error: f64,
    pub replicates: usize,
    pub kind: DistanceKind,
    pub dims: Dims,
    pub master_seed: u64,
}

impl EstimateWithError {
    /// `H = √(H²)`, clamped at zero.
    pub fn hellinger(&self) -> f64 {
        self.mean.max(0.0).sqrt()
    }
}

/// Conservative standard error of a difference or sum of two estimates that
/// may share random streams: `se_a + se_b`.
pub fn joint_std_error(a: f64, b: f64) -> f64 {
    a + b
}

fn check_replicates(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 replicates, got {n}")));
    }
    Ok(())
}

fn summarize(values: &[f64], kind: DistanceKind, d: Dims, seed: u64) -> Result<EstimateWithError> {
    let (mean, se) = mean_and_std_error(values)?;
    Ok(EstimateWithError {
        mean,
        std_error: se,
        replicates: values.len(),
        kind,
        dims: d,
        master_seed: seed,
    })
}

fn tv_term(lr: LogRatio) -> f64 {
    if lr.is_outside_support() {
        1.0
    } else {
        (lr.ratio() - 1.0).abs()
    }
}

fn hellinger_term(lr: LogRatio) -> f64 {
    if lr.is_outside_support() {
        0.0
    } else {
        (0.5 * lr.value()).exp()
    }
}

fn g_side_ratios(d: Dims, replicates: usize, seed: u64) -> Result<Vec<LogRatio>> {
    check_replicates(replicates)?;
    let eval = RatioEvaluator::new(d, KnMode::Exact)?;
    par_replicates(replicates, |i| {
        let mut s = RngStream::new(seed, i);
        let g = sample_gaussian_matrix(d.p(), d.q(), &mut s)?;
        eval.eval(&g)
    })
}

/// `TV = E_G |f(G)/g(G) − 1|`.
pub fn estimate_tv(d: Dims, replicates: usize, seed: u64) -> Result<EstimateWithError> {
    let terms: Vec<f64> = g_side_ratios(d, replicates, seed)?.into_iter().map(tv_term).collect();
    summarize(&terms, DistanceKind::Tv, d, seed)
}

/// `H² = 1 − E_G exp(ln(f/g)/2)`.
pub fn estimate_hellinger(d: Dims, replicates: usize, seed: u64) -> Result<EstimateWithError> {
    let terms: Vec<f64> = g_side_ratios(d, replicates, seed)?
        .into_iter()
        .map(|lr| 1.0 - hellinger_term(lr))
        .collect();
    summarize(&terms, DistanceKind::Hellinger, d, seed)
}

/// TV and `H²` from one shared set of Gaussian draws.
pub fn estimate_tv_and_hellinger(
    d: Dims,
    replicates: usize,
    seed: u64,
) -> Result<(EstimateWithError, EstimateWithError)> {
    let ratios = g_side_ratios(d, replicates, seed)?;
    let tv: Vec<f64> = ratios.iter().copied().map(tv_term).collect();
    let h: Vec<f64> = ratios.iter().map(|&lr| 1.0 - hellinger_term(lr)).collect();
    Ok((
        summarize(&tv, DistanceKind::Tv, d, seed)?,
        summarize(&h, DistanceKind::Hellinger, d, seed)?,
    ))
}

fn z_side_ratios(d: Dims, replicates: usize, seed: u64) -> Result<Vec<f64>> {
    check_replicates(replicates)?;
    let eval = RatioEvaluator::new(d, KnMode::Exact)?;
    let scale = (d.n() as f64).sqrt();
    par_replicates(replicates, |i| {
        let mut s = RngStream::new(seed, i);
        let z = sample_haar_submatrix(d, &mut s)?.scaled(scale);
        let lr = eval.eval(&z)?;
        if lr.is_outside_support() {
            return Err(support_violation(d, seed, i, &z));
        }
        Ok(lr.value())
    })
}

fn support_violation(d: Dims, seed: u64, replicate: u64, z: &crate::numerics::RealMatrix) -> Error {
    let n = d.n() as f64;
    let g = if z.cols() <= z.rows() { z.gram() } else { z.outer_gram() };
    let eig = symmetric_eigen(&g, crate::numerics::linalg::default_eigen_tol(&g))
        .map(|e| {
            e.eigenvalues
                .iter()
                .map(|l| format!("{:.6e}", l / n))
                .collect::<Vec<_>>()
                .join(", ")
        })
        .unwrap_or_else(|e| format!("<eigensolve failed: {e}>"));
    Error::SupportViolation(format!(
        "dims {d}, seed {seed}, replicate {replicate}: eigenvalues of z'z/n = [{eig}]"
    ))
}

/// `KL = E_Z ln(f/g)(√n Z)`. A Haar draw outside the support aborts the run.
pub fn estimate_kl(d: Dims, replicates: usize, seed: u64) -> Result<EstimateWithError> {
    let values = z_side_ratios(d, replicates, seed)?;
    summarize(&values, DistanceKind::Kl, d, seed)
}

/// TV from Haar draws: `E_Z |1 − g/f|`.
pub fn estimate_tv_from_haar(d: Dims, replicates: usize, seed: u64) -> Result<EstimateWithError> {
    let terms: Vec<f64> = z_side_ratios(d, replicates, seed)?
        .into_iter()
        .map(|lr| (1.0 - (-lr).exp()).abs())
        .collect();
    summarize(&terms, DistanceKind::Tv, d, seed)
}

/// The Gaussian-side TV term with the density path switched off: every draw
/// counts as outside the support of `√n Z`. Meant for `p + q > n`, where `√n Z`
/// has no density and the estimator reduces to `E_G |0 − 1| = 1`.
pub fn estimate_tv_density_disabled(d: Dims, replicates: usize, seed: u64) -> Result<EstimateWithError> {
    check_replicates(replicates)?;
    let terms = par_replicates(replicates, |i| {
        let mut s = RngStream::new(seed, i);
        sample_gaussian_matrix(d.p(), d.q(), &mut s)?;
        Ok(tv_term(LogRatio::OUTSIDE_SUPPORT))
    })?;
    summarize(&terms, DistanceKind::Tv, d, seed)
}

pub fn estimate(kind: DistanceKind, d: Dims, replicates: usize, seed: u64) -> Result<EstimateWithError> {
    match kind {
        DistanceKind::Tv => estimate_tv(d, replicates, seed),
        DistanceKind::Kl => estimate_kl(d, replicates, seed),
        DistanceKind::Hellinger => estimate_hellinger(d, replicates, seed),
    }
}

/// `lhs ≤ rhs + k · joint_se`, an inequality between estimates checked up to
/// Monte Carlo error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub joint_se: f64,
    pub k: f64,
}

impl InequalityCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + self.k * self.joint_se
    }
}

/// Pinsker: `TV² ≤ 2 KL`, with the delta-method error `2 TV se_TV + 2 se_KL`
/// and slack factor 6.
pub fn pinsker_check(tv: &EstimateWithError, kl: &EstimateWithError) -> InequalityCheck {
    InequalityCheck {
        name: "pinsker",
        lhs: tv.mean * tv.mean,
        rhs: 2.0 * kl.mean,
        joint_se: 2.0 * tv.mean.abs() * tv.std_error + 2.0 * kl.std_error,
        k: 6.0,
    }
}

/// `2H² ≤ TV` and `TV ≤ 2√2 H`, each with slack 3 joint standard errors.
pub fn sandwich_checks(tv: &EstimateWithError, h2: &EstimateWithError) -> [InequalityCheck; 2] {
    let h = h2.hellinger();
    let se_h = if h > 0.0 { h2.std_error / (2.0 * h) } else { h2.std_error.sqrt() };
    let r8 = 8f64.sqrt();
    [
        InequalityCheck {
            name: "hellinger_lower",
            lhs: 2.0 * h2.mean,
            rhs: tv.mean,
            joint_se: 2.0 * h2.std_error + tv.std_error,
            k: 3.0,
        },
        InequalityCheck {
            name: "hellinger_upper",
            lhs: tv.mean,
            rhs: r8 * h,
            joint_se: tv.std_error + r8 * se_h,
            k: 3.0,
        },
    ]
}

/// `E|e^ξ − 1|` for `ξ ~ N(−σ²/8, σ²/4)`, which equals `4Φ(σ/4) − 2`.
pub fn tv_limit_lower_bound(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    Ok(4.0 * normal_cdf(sigma / 4.0) - 2.0)
}
