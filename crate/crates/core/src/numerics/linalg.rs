//! Dense row-major matrices and the two factorizations the crate needs:
//! Cholesky (log-determinant with positive-definiteness detection) and cyclic
//! Jacobi (symmetric eigenvalues).

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite entry {} at ({}, {})",
                data[pos],
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order, order);
        for i in 0..order {
            m.data[i * order + i] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq().sqrt()
    }

    /// `X'X`, a `cols × cols` symmetric matrix. The lower triangle is a copy
    /// of the upper one, so the result is exactly symmetric.
    pub fn gram(&self) -> Self {
        let c = self.cols;
        let mut g = vec![0.0; c * c];
        for row in self.data.chunks_exact(c) {
            for a in 0..c {
                let ra = row[a];
                if ra == 0.0 {
                    continue;
                }
                let out = &mut g[a * c..a * c + c];
                for b in a..c {
                    out[b] += ra * row[b];
                }
            }
        }
        for a in 0..c {
            for b in 0..a {
                g[a * c + b] = g[b * c + a];
            }
        }
        Self::from_vec_unchecked(c, c, g)
    }

    /// `XX'`, a `rows × rows` symmetric matrix.
    pub fn outer_gram(&self) -> Self {
        let r = self.rows;
        let mut g = vec![0.0; r * r];
        for a in 0..r {
            for b in a..r {
                let v = dot(self.row(a), self.row(b));
                g[a * r + b] = v;
                g[b * r + a] = v;
            }
        }
        Self::from_vec_unchecked(r, r, g)
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// CSV dump: a `# rows cols` header followed by row-major lines with 17
    /// significant digits.
    pub fn to_csv_string(&self) -> String {
        let mut s = format!("# {} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{x:.16e}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Shape("empty matrix file".into()))?;
        let dims: Vec<usize> = header
            .trim_start_matches('#')
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Shape(format!("bad matrix header {header:?}: {e}")))?;
        if dims.len() != 2 {
            return Err(Error::Shape(format!("bad matrix header {header:?}")));
        }
        let mut data = Vec::with_capacity(dims[0] * dims[1]);
        for line in lines.filter(|l| !l.trim().is_empty()) {
            for tok in line.split(',') {
                let v = tok
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Shape(format!("bad matrix entry {tok:?}: {e}")))?;
                data.push(v);
            }
        }
        Self::new(dims[0], dims[1], data)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }
}

/// Dot product with four independent accumulators.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ta, tb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut tail = 0.0;
    for (x, y) in ta.iter().zip(tb) {
        tail += x * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Outcome of a Cholesky attempt.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogDet {
    Finite(f64),
    NotPositiveDefinite,
}

impl LogDet {
    pub fn value(self) -> Option<f64> {
        match self {
            LogDet::Finite(v) => Some(v),
            LogDet::NotPositiveDefinite => None,
        }
    }
}

/// `ln det A` for symmetric `A`, or [`LogDet::NotPositiveDefinite`] when a
/// pivot is not strictly positive. Only the lower triangle is read.
pub fn cholesky_logdet(a: &RealMatrix) -> Result<LogDet> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "cholesky_logdet needs a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let mut l = vec![0.0; n * n];
    let mut logdet = 0.0;
    for j in 0..n {
        let lj = &l[j * n..j * n + j];
        let d = a.get(j, j) - dot(lj, lj);
        if !(d > 0.0) {
            return Ok(LogDet::NotPositiveDefinite);
        }
        let djj = d.sqrt();
        logdet += 2.0 * djj.ln();
        l[j * n + j] = djj;
        for i in (j + 1)..n {
            let s = a.get(i, j) - dot(&l[i * n..i * n + j], &l[j * n..j * n + j]);
            l[i * n + j] = s / djj;
        }
    }
    Ok(LogDet::Finite(logdet))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricEigen {
    /// Sorted in descending order.
    pub eigenvalues: Vec<f64>,
    pub rotations_applied: usize,
}

const MAX_SWEEPS: usize = 100;

/// Default Jacobi tolerance `1e-12 ‖A‖_F`.
pub fn default_eigen_tol(a: &RealMatrix) -> f64 {
    (1e-12 * a.frobenius()).max(f64::MIN_POSITIVE)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps. Iterates until
/// the largest off-diagonal magnitude is at most `tol`.
pub fn symmetric_eigen(a: &RealMatrix, tol: f64) -> Result<SymmetricEigen> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "symmetric_eigen needs a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let scale = a.data.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let asym = a.max_asymmetry();
    if asym > 1e-10 * scale {
        return Err(Error::Shape(format!("matrix is not symmetric (asymmetry {asym:e})")));
    }

    let n = a.rows;
    let mut m = a.data.clone();
    // symmetrize exactly so both triangles stay in lockstep
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[i * n + j] + m[j * n + i]);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }

    let off_max = |m: &[f64]| {
        let mut w: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                w = w.max(m[i * n + j].abs());
            }
        }
        w
    };

    let mut rotations = 0usize;
    let mut sweeps = 0usize;
    while off_max(&m) > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numerical(format!(
                "Jacobi did not reach tolerance {tol:e} in {MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = m[r * n + p];
                    let arq = m[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    m[r * n + p] = new_rp;
                    m[p * n + r] = new_rp;
                    m[r * n + q] = new_rq;
                    m[q * n + r] = new_rq;
                }
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                rotations += 1;
            }
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(SymmetricEigen {
        eigenvalues,
        rotations_applied: rotations,
    })
}
