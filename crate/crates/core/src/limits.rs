//! Coupling and limit-theorem experiments.
//!
//! - Hilbert–Schmidt distance `‖√n Γ − Y‖` between the coupled blocks, with
//!   its column-wise decomposition.
//! - The statistic `W = (1/(2pq)) Σ_{i≠j} [(gᵢ'gⱼ)² − p]` of a Gaussian block,
//!   approximately standard normal for `1 ≪ q ≪ p`.
//! - Concentration of the eigenvalues of `X'X / p` around 1 for `q ≪ p`.

use crate::error::{Error, Result};
use crate::numerics::linalg::{default_eigen_tol, dot};
use crate::numerics::stats::{quantile, sample_variance};
use crate::numerics::{
    ks_statistic, mean_and_std_error, normal_cdf, par_replicates, symmetric_eigen, Histogram,
    RngStream,
};
use crate::sampling::{gram_schmidt_coupling, sample_gaussian_matrix, Dims};
use serde::Serialize;

/// Per-column terms of `‖M(√n γⱼ − yⱼ)‖² = AⱼBⱼ + Cⱼ + εⱼ`, where `M` keeps
/// the top `p` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HsColumnTerms {
    /// `(√n − ‖wⱼ‖)²`
    pub a: f64,
    /// `‖Mγⱼ‖²`
    pub b: f64,
    /// `‖M Σ_{j−1} yⱼ‖²`
    pub c: f64,
    /// `−2(√n − ‖wⱼ‖)⟨Mγⱼ, M Σ_{j−1} yⱼ⟩`
    pub eps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HsSample {
    /// `‖√n Γ_{p×q} − Y_{p×q}‖`, from the definition.
    pub hs_norm: f64,
    pub term_ab: f64,
    pub term_c: f64,
    pub cross: f64,
    pub columns: Vec<HsColumnTerms>,
}

/// One coupled draw and its Hilbert–Schmidt decomposition.
pub fn hs_sample(d: Dims, stream: &mut RngStream) -> Result<HsSample> {
    let f = gram_schmidt_coupling(d.n(), d.q(), stream)?;
    let p = d.p();
    let sq_n = (d.n() as f64).sqrt();
    let mut hs_sq = 0.0;
    let mut columns = Vec::with_capacity(d.q());
    for j in 0..d.q() {
        let y = &f.y[j][..p];
        let g = &f.gamma[j][..p];
        let w = f.w_norm[j];
        let proj = &f.projection(j)[..p];
        hs_sq += y
            .iter()
            .zip(g)
            .map(|(y, g)| {
                let r = sq_n * g - y;
                r * r
            })
            .sum::<f64>();
        let gap = sq_n - w;
        columns.push(HsColumnTerms {
            a: gap * gap,
            b: dot(g, g),
            c: dot(proj, proj),
            eps: -2.0 * gap * dot(g, proj),
        });
    }
    Ok(HsSample {
        hs_norm: hs_sq.sqrt(),
        term_ab: columns.iter().map(|t| t.a * t.b).sum(),
        term_c: columns.iter().map(|t| t.c).sum(),
        cross: columns.iter().map(|t| t.eps).sum(),
        columns,
    })
}

/// CDF of `s |N(0,1)|`.
pub fn half_normal_cdf(scale: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        2.0 * normal_cdf(x / scale) - 1.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HsExperiment {
    pub dims: Dims,
    pub replicates: usize,
    pub master_seed: u64,
    #[serde(skip)]
    pub samples: Vec<HsSample>,
    /// Mean of `hs_norm²`.
    pub mean_sq: f64,
    pub mean_sq_se: f64,
    pub mean_hs: f64,
    pub mean_hs_se: f64,
    /// Mean of `Σ Cⱼ`.
    pub mean_term_c: f64,
    pub mean_term_c_se: f64,
    /// `24 pq²/n`
    pub bound: f64,
    /// `σ = pq²/n`
    pub sigma: f64,
    /// `√(σ/2)`, the large-`q` limit of the mean norm.
    pub sigma_limit: f64,
    /// For `q = 1`: KS distance to `√(c/2)|N(0,1)|` with `c = p/n`.
    pub ks_vs_limit: Option<f64>,
}

impl HsExperiment {
    pub fn norms(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.hs_norm).collect()
    }
}

pub fn run_hs_experiment(d: Dims, replicates: usize, seed: u64) -> Result<HsExperiment> {
    let samples = par_replicates(replicates, |i| hs_sample(d, &mut RngStream::new(seed, i)))?;
    let norms: Vec<f64> = samples.iter().map(|s| s.hs_norm).collect();
    let squares: Vec<f64> = norms.iter().map(|x| x * x).collect();
    let cs: Vec<f64> = samples.iter().map(|s| s.term_c).collect();
    let (mean_sq, mean_sq_se) = mean_and_std_error(&squares)?;
    let (mean_hs, mean_hs_se) = mean_and_std_error(&norms)?;
    let (mean_term_c, mean_term_c_se) = mean_and_std_error(&cs)?;
    let sigma = d.pq2_over_n();
    let ks_vs_limit = if d.q() == 1 {
        let scale = (d.p() as f64 / d.n() as f64 / 2.0).sqrt();
        Some(ks_statistic(&norms, |x| half_normal_cdf(scale, x))?)
    } else {
        None
    };
    Ok(HsExperiment {
        dims: d,
        replicates,
        master_seed: seed,
        samples,
        mean_sq,
        mean_sq_se,
        mean_hs,
        mean_hs_se,
        mean_term_c,
        mean_term_c_se,
        bound: 24.0 * sigma,
        sigma,
        sigma_limit: (sigma / 2.0).sqrt(),
        ks_vs_limit,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CltSample {
    pub w: f64,
}

/// `Σ_{i≠j} Gᵢⱼ²` for a symmetric Gram matrix given row-major.
fn off_diagonal_sq(g: &[f64], q: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..q {
        for j in (i + 1)..q {
            let v = g[i * q + j];
            acc += v * v;
        }
    }
    2.0 * acc
}

/// `W = (1/(2pq)) (Σ_{i≠j} (gᵢ'gⱼ)² − q(q−1)p)` for a fresh `p × q` block.
pub fn clt_w_statistic(p: usize, q: usize, stream: &mut RngStream) -> Result<CltSample> {
    if p < 2 || q < 2 {
        return Err(Error::Domain(format!("W statistic needs p, q >= 2, got p={p}, q={q}")));
    }
    let x = sample_gaussian_matrix(p, q, stream)?;
    let g = x.gram();
    let (pf, qf) = (p as f64, q as f64);
    let centered = off_diagonal_sq(g.as_slice(), q) - qf * (qf - 1.0) * pf;
    Ok(CltSample {
        w: centered / (2.0 * pf * qf),
    })
}

/// `p = 1` variant scaled by `q^{−3/2}`:
/// `q^{−3/2} Σ_{i≠j} (gᵢ² gⱼ² − 1)`, asymptotically `N(0, 8)`.
pub fn clt_w_rank_one(q: usize, stream: &mut RngStream) -> Result<f64> {
    if q < 2 {
        return Err(Error::Domain(format!("rank-one W needs q >= 2, got {q}")));
    }
    let mut s2 = 0.0;
    let mut s4 = 0.0;
    for _ in 0..q {
        let g = stream.gaussian();
        let g2 = g * g;
        s2 += g2;
        s4 += g2 * g2;
    }
    let qf = q as f64;
    Ok((s2 * s2 - s4 - qf * (qf - 1.0)) / qf.powf(1.5))
}

/// `Var W = ((q−1)/q)(1 + 3/p + 2(q−2)/p)`.
pub fn w_exact_variance(p: usize, q: usize) -> f64 {
    let (pf, qf) = (p as f64, q as f64);
    (qf - 1.0) / qf * (1.0 + 3.0 / pf + 2.0 * (qf - 2.0) / pf)
}

/// `(p, q)` points of the W-statistic histogram grid.
pub const FIGURE_GRID: [(usize, usize); 6] =
    [(165, 30), (900, 30), (1600, 40), (355, 50), (2500, 50), (10000, 100)];

pub const HISTOGRAM_BINS: usize = 61;
pub const HISTOGRAM_RANGE: (f64, f64) = (-4.0, 4.0);

#[derive(Clone, Debug, Serialize)]
pub struct CltGridPoint {
    pub p: usize,
    pub q: usize,
    pub replicates: usize,
    pub master_seed: u64,
    #[serde(skip)]
    pub samples: Vec<f64>,
    pub ks: f64,
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub exact_variance: f64,
    #[serde(skip)]
    pub histogram: Histogram,
}

/// `replicates` draws of `W` at `(p, q)` on RNG domain `domain`.
pub fn run_clt_point(p: usize, q: usize, replicates: usize, seed: u64, domain: u64) -> Result<CltGridPoint> {
    let samples = par_replicates(replicates, |i| {
        Ok(clt_w_statistic(p, q, &mut RngStream::for_domain(seed, domain, i))?.w)
    })?;
    let (mean, mean_se) = mean_and_std_error(&samples)?;
    let (lo, hi) = HISTOGRAM_RANGE;
    Ok(CltGridPoint {
        p,
        q,
        replicates,
        master_seed: seed,
        ks: ks_statistic(&samples, normal_cdf)?,
        mean,
        mean_se,
        variance: sample_variance(&samples)?,
        exact_variance: w_exact_variance(p, q),
        histogram: Histogram::from_samples(lo, hi, HISTOGRAM_BINS, &samples)?,
        samples,
    })
}

/// Every point of [`FIGURE_GRID`], each on RNG domain 0 of `seed`.
pub fn clt_figure_grid(seed: u64, replicates: usize) -> Result<Vec<CltGridPoint>> {
    FIGURE_GRID
        .iter()
        .map(|&(p, q)| run_clt_point(p, q, replicates, seed, 0))
        .collect()
}

/// `Var` of the rank-one statistic: `8(q − 1)/q`.
pub fn w_rank_one_exact_variance(q: usize) -> f64 {
    8.0 * (q as f64 - 1.0) / q as f64
}

/// Rank-one (`p = 1`) counterpart of [`run_clt_point`]. The KS distance is
/// against `N(0, 8)` and the histogram holds `W/√8`.
pub fn run_clt_rank_one_point(q: usize, replicates: usize, seed: u64, domain: u64) -> Result<CltGridPoint> {
    let samples = par_replicates(replicates, |i| {
        clt_w_rank_one(q, &mut RngStream::for_domain(seed, domain, i))
    })?;
    let (mean, mean_se) = mean_and_std_error(&samples)?;
    let root8 = 8f64.sqrt();
    let scaled: Vec<f64> = samples.iter().map(|w| w / root8).collect();
    let (lo, hi) = HISTOGRAM_RANGE;
    Ok(CltGridPoint {
        p: 1,
        q,
        replicates,
        master_seed: seed,
        ks: ks_statistic(&scaled, normal_cdf)?,
        mean,
        mean_se,
        variance: sample_variance(&samples)?,
        exact_variance: w_rank_one_exact_variance(q),
        histogram: Histogram::from_samples(lo, hi, HISTOGRAM_BINS, &scaled)?,
        samples,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenConcentration {
    pub p: usize,
    pub q: usize,
    pub replicates: usize,
    pub master_seed: u64,
    /// `max_i |λᵢ/p − 1|` per draw.
    pub max_dev_samples: Vec<f64>,
}

impl EigenConcentration {
    pub fn quantile(&self, level: f64) -> Result<f64> {
        quantile(&self.max_dev_samples, level)
    }
}

/// Draws of `max_i |λᵢ/p − 1|` for the eigenvalues of `X'X`, `X` a `p × q`
/// Gaussian block.
pub fn eigen_concentration(p: usize, q: usize, replicates: usize, seed: u64) -> Result<EigenConcentration> {
    if q > p || q == 0 {
        return Err(Error::Domain(format!("eigen_concentration needs 1 <= q <= p, got p={p}, q={q}")));
    }
    let pf = p as f64;
    let max_dev_samples = par_replicates(replicates, |i| {
        let mut s = RngStream::new(seed, i);
        let g = sample_gaussian_matrix(p, q, &mut s)?.gram();
        let e = symmetric_eigen(&g, default_eigen_tol(&g))?;
        Ok(e.eigenvalues.iter().fold(0.0f64, |m, l| m.max((l / pf - 1.0).abs())))
    })?;
    Ok(EigenConcentration {
        p,
        q,
        replicates,
        master_seed: seed,
        max_dev_samples,
    })
}
