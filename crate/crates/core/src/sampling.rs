//! Gaussian blocks, chi-square variates, Haar submatrices and the
//! Gram–Schmidt coupling.
//!
//! Only the first `q` columns of the `n × n` Haar matrix are ever built: they
//! are the orthonormalized first `q` columns of an `n × n` Gaussian matrix.

use crate::error::{Error, Result};
use crate::numerics::linalg::{axpy, dot};
use crate::numerics::{RealMatrix, RngStream};
use rand_distr::{ChiSquared, Distribution};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The triple `(n, p, q)`: ambient order `n` and block shape `p × q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDims")]
pub struct Dims {
    n: usize,
    p: usize,
    q: usize,
}

#[derive(Deserialize)]
struct RawDims {
    n: usize,
    p: usize,
    q: usize,
}

impl TryFrom<RawDims> for Dims {
    type Error = Error;
    fn try_from(r: RawDims) -> Result<Self> {
        Dims::new(r.n, r.p, r.q)
    }
}

impl Dims {
    pub fn new(n: usize, p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 || p > n || q > n {
            return Err(Error::InvalidDims { n, p, q });
        }
        Ok(Self { n, p, q })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Swaps the roles of `p` and `q`.
    pub fn transposed(&self) -> Self {
        Self {
            n: self.n,
            p: self.q,
            q: self.p,
        }
    }

    /// The orientation with `q ≤ p`.
    pub fn canonical(&self) -> Self {
        if self.q <= self.p {
            *self
        } else {
            self.transposed()
        }
    }

    /// Whether `√n Z` has a Lebesgue density, i.e. `p + q ≤ n`.
    pub fn has_density(&self) -> bool {
        self.p + self.q <= self.n
    }

    pub fn require_density(&self) -> Result<()> {
        if self.has_density() {
            Ok(())
        } else {
            Err(Error::UnsupportedRegime {
                n: self.n,
                p: self.p,
                q: self.q,
            })
        }
    }

    /// `pq/n`, the distance-regime parameter.
    pub fn pq_over_n(&self) -> f64 {
        (self.p as f64 * self.q as f64) / self.n as f64
    }

    /// `pq²/n`, the coupling-regime parameter.
    pub fn pq2_over_n(&self) -> f64 {
        (self.p as f64 * self.q as f64 * self.q as f64) / self.n as f64
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, p={}, q={})", self.n, self.p, self.q)
    }
}

/// `rows × cols` block of independent standard normals, filled row by row.
pub fn sample_gaussian_matrix(rows: usize, cols: usize, stream: &mut RngStream) -> Result<RealMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::Domain(format!(
            "Gaussian matrix needs positive dimensions, got {rows}x{cols}"
        )));
    }
    let mut data = vec![0.0; rows * cols];
    stream.fill_gaussian(&mut data);
    Ok(RealMatrix::from_vec_unchecked(rows, cols, data))
}

pub fn sample_chi_square(m: usize, stream: &mut RngStream) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("chi-square needs m >= 1 degrees of freedom".into()));
    }
    let dist = ChiSquared::new(m as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(dist.sample(stream.inner()))
}

const PIVOT_TOL: f64 = 1e-12;

/// Full-length output of Gram–Schmidt on `q` Gaussian columns of length `n`.
///
/// For column `j`, `w_j = y_j − Σ_{j−1} y_j` is the residual after projecting
/// out the earlier directions and `γ_j = w_j / ‖w_j‖`.
#[derive(Clone, Debug)]
pub struct GramSchmidtFactor {
    pub n: usize,
    /// The Gaussian columns actually used (after any resampling).
    pub y: Vec<Vec<f64>>,
    /// Orthonormal columns.
    pub gamma: Vec<Vec<f64>>,
    /// `‖w_j‖`.
    pub w_norm: Vec<f64>,
    /// Number of columns redrawn because of a degenerate pivot.
    pub resampled_columns: usize,
}

impl GramSchmidtFactor {
    /// `Σ_{j−1} y_j = y_j − ‖w_j‖ γ_j`, the projection of `y_j` onto the span
    /// of the earlier columns.
    pub fn projection(&self, j: usize) -> Vec<f64> {
        if j == 0 {
            return vec![0.0; self.n];
        }
        let w = self.w_norm[j];
        self.y[j]
            .iter()
            .zip(&self.gamma[j])
            .map(|(y, g)| y - w * g)
            .collect()
    }

    /// Top `p` rows of the orthonormal columns as a `p × q` matrix.
    pub fn gamma_block(&self, p: usize) -> RealMatrix {
        block(&self.gamma, p)
    }

    /// Top `p` rows of the Gaussian columns as a `p × q` matrix.
    pub fn y_block(&self, p: usize) -> RealMatrix {
        block(&self.y, p)
    }
}

fn block(cols: &[Vec<f64>], p: usize) -> RealMatrix {
    let q = cols.len();
    let mut data = vec![0.0; p * q];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..p {
            data[i * q + j] = c[i];
        }
    }
    RealMatrix::from_vec_unchecked(p, q, data)
}

/// Modified Gram–Schmidt with one reorthogonalization pass whenever the
/// residual norm falls below `1/√2` of the pre-projection norm.
///
/// Columns are drawn one after another from `stream`, `n` deviates each. If a
/// residual norm is below `1e-12` the column is redrawn from the next child
/// lane of `stream`.
pub fn gram_schmidt_coupling(n: usize, q: usize, stream: &mut RngStream) -> Result<GramSchmidtFactor> {
    if q == 0 || q > n {
        return Err(Error::Domain(format!("need 1 <= q <= n, got n={n}, q={q}")));
    }
    let mut y: Vec<Vec<f64>> = Vec::with_capacity(q);
    let mut gamma: Vec<Vec<f64>> = Vec::with_capacity(q);
    let mut w_norm = Vec::with_capacity(q);
    let mut lane = 0u64;
    let mut resampled = 0usize;

    for _ in 0..q {
        let mut col = vec![0.0; n];
        stream.fill_gaussian(&mut col);
        loop {
            let mut v = col.clone();
            let before = dot(&v, &v).sqrt();
            project_out(&gamma, &mut v);
            let mut norm = dot(&v, &v).sqrt();
            if norm < before * std::f64::consts::FRAC_1_SQRT_2 {
                project_out(&gamma, &mut v);
                norm = dot(&v, &v).sqrt();
            }
            if norm >= PIVOT_TOL {
                let inv = 1.0 / norm;
                v.iter_mut().for_each(|x| *x *= inv);
                y.push(col);
                gamma.push(v);
                w_norm.push(norm);
                break;
            }
            lane += 1;
            resampled += 1;
            stream.child(lane).fill_gaussian(&mut col);
        }
    }
    Ok(GramSchmidtFactor {
        n,
        y,
        gamma,
        w_norm,
        resampled_columns: resampled,
    })
}

fn project_out(basis: &[Vec<f64>], v: &mut [f64]) {
    for g in basis {
        let c = dot(g, v);
        axpy(-c, g, v);
    }
}

/// Upper-left `p × q` block of a Haar orthogonal `n × n` matrix (unscaled).
pub fn sample_haar_submatrix(d: Dims, stream: &mut RngStream) -> Result<RealMatrix> {
    Ok(gram_schmidt_coupling(d.n(), d.q(), stream)?.gamma_block(d.p()))
}

/// `(Y, Γ)`: the top `p × q` blocks of the Gaussian columns and of their
/// Gram–Schmidt orthonormalization.
#[derive(Clone, Debug)]
pub struct CoupledPair {
    pub y_block: RealMatrix,
    pub gamma_block: RealMatrix,
}

pub fn sample_coupled_pair(d: Dims, stream: &mut RngStream) -> Result<CoupledPair> {
    let f = gram_schmidt_coupling(d.n(), d.q(), stream)?;
    Ok(CoupledPair {
        y_block: f.y_block(d.p()),
        gamma_block: f.gamma_block(d.p()),
    })
}
