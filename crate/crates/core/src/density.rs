//! Log-space likelihood ratio between `√n Z` (Haar block) and `G` (Gaussian
//! block).
//!
//! For `p + q ≤ n` and `q ≤ p` the ratio factors as `f/g = K_n · L_n` with
//!
//! - `K_n = (2/n)^{pq/2} ∏_{j=0}^{q−1} Γ((n−j)/2) / Γ((n−p−j)/2)`
//! - `L_n = det(I − z'z/n)^{c_n} · exp(tr(z'z)/2)` on the support, `0` off it
//! - `c_n = (n − p − q − 1)/2`
//!
//! The roles of `p` and `q` are interchangeable, so every entry point
//! canonicalizes to `q ≤ p` first.

use crate::error::{Error, Result};
use crate::numerics::{cholesky_logdet, log_gamma, log_gamma_diff, LogDet, RealMatrix};
use crate::sampling::Dims;
use serde::Serialize;

/// `ln(f/g)` at a point, or `NEG_INFINITY` outside the support of `f`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogRatio(f64);

impl LogRatio {
    pub const OUTSIDE_SUPPORT: LogRatio = LogRatio(f64::NEG_INFINITY);

    pub fn finite(v: f64) -> Self {
        debug_assert!(v.is_finite());
        Self(v)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_outside_support(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// `f/g`, zero outside the support.
    pub fn ratio(self) -> f64 {
        self.0.exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KnMode {
    Exact,
    Asymptotic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KnParts {
    pub log_kn: f64,
    /// `(n − p − q − 1)/2`
    pub c_n: f64,
    pub mode: KnMode,
}

/// `(n − p − q − 1)/2`, formed in integers.
pub fn c_n(d: Dims) -> f64 {
    (d.n() as i64 - d.p() as i64 - d.q() as i64 - 1) as f64 / 2.0
}

/// `ln ω(s, t)` where `1/ω(s,t) = π^{t(t−1)/4} 2^{st/2} ∏_{j=1}^t Γ((s−j+1)/2)`.
pub fn log_wishart_constant(s: f64, t: usize) -> Result<f64> {
    if t == 0 {
        return Err(Error::Domain("Wishart constant needs t >= 1".into()));
    }
    if !(s > t as f64 - 1.0) {
        return Err(Error::Domain(format!(
            "Wishart constant needs s > t - 1, got s={s}, t={t}"
        )));
    }
    let tf = t as f64;
    let mut acc = tf * (tf - 1.0) / 4.0 * std::f64::consts::PI.ln() + s * tf / 2.0 * std::f64::consts::LN_2;
    for j in 1..=t {
        acc += log_gamma((s - j as f64 + 1.0) / 2.0)?;
    }
    Ok(-acc)
}

/// `ln K_n` from log-gamma differences.
pub fn log_kn_exact(d: Dims) -> Result<KnParts> {
    let d = d.canonical();
    d.require_density()?;
    let (n, p, q) = (d.n() as f64, d.p() as f64, d.q());
    let mut acc = p * q as f64 / 2.0 * (2.0 / n).ln();
    for j in 0..q {
        let j = j as f64;
        acc += log_gamma_diff((n - j) / 2.0, (n - p - j) / 2.0)?;
    }
    Ok(KnParts {
        log_kn: acc,
        c_n: c_n(d),
        mode: KnMode::Exact,
    })
}

/// Four-term expansion of `ln K_n` on raw `(n, p, q)` with `q ≤ p < n`.
/// `q = 0` gives 0 (empty product).
pub fn log_kn_asymptotic_raw(n: usize, p: usize, q: usize) -> Result<f64> {
    if q == 0 {
        return Ok(0.0);
    }
    if p >= n {
        return Err(Error::Domain(format!(
            "asymptotic ln K_n needs p < n, got n={n}, p={p}"
        )));
    }
    let (nf, pf, qf) = (n as f64, p as f64, q as f64);
    let cn = (n as i64 - p as i64 - q as i64 - 1) as f64 / 2.0;
    let log_one_minus = (-pf / nf).ln_1p();
    Ok(-pf * qf / 2.0 - qf * (qf + 1.0) / 4.0 * log_one_minus - pf * qf.powi(3) / (12.0 * nf * nf)
        - cn * qf * log_one_minus)
}

pub fn log_kn_asymptotic(d: Dims) -> Result<KnParts> {
    let d = d.canonical();
    Ok(KnParts {
        log_kn: log_kn_asymptotic_raw(d.n(), d.p(), d.q())?,
        c_n: c_n(d),
        mode: KnMode::Asymptotic,
    })
}

pub fn log_kn(d: Dims, mode: KnMode) -> Result<KnParts> {
    match mode {
        KnMode::Exact => log_kn_exact(d),
        KnMode::Asymptotic => {
            d.require_density()?;
            log_kn_asymptotic(d)
        }
    }
}

fn check_shape(z: &RealMatrix, d: Dims) -> Result<()> {
    if z.rows() != d.p() || z.cols() != d.q() {
        return Err(Error::Shape(format!(
            "evaluation point is {}x{}, dims {} require {}x{}",
            z.rows(),
            z.cols(),
            d,
            d.p(),
            d.q()
        )));
    }
    Ok(())
}

/// Gram matrix on the smaller side: `z'z` if `q ≤ p`, else `zz'`.
fn small_gram(z: &RealMatrix) -> RealMatrix {
    if z.cols() <= z.rows() {
        z.gram()
    } else {
        z.outer_gram()
    }
}

/// `ln L_n = c_n ln det(I − z'z/n) + tr(z'z)/2`, or the outside-support
/// sentinel when `I − z'z/n` is not positive definite.
pub fn log_ln(z: &RealMatrix, d: Dims) -> Result<LogRatio> {
    check_shape(z, d)?;
    let s = small_gram(z);
    let k = s.rows();
    let inv_n = 1.0 / d.n() as f64;
    let mut a = s.scaled(-inv_n);
    for i in 0..k {
        a.set(i, i, 1.0 + a.get(i, i));
    }
    match cholesky_logdet(&a)? {
        LogDet::NotPositiveDefinite => Ok(LogRatio::OUTSIDE_SUPPORT),
        LogDet::Finite(ld) => Ok(LogRatio::finite(c_n(d) * ld + 0.5 * s.trace())),
    }
}

/// `ln(f/g)` at `point`, a realization of `√n Z` or of `G`.
pub fn log_likelihood_ratio(point: &RealMatrix, d: Dims, mode: KnMode) -> Result<LogRatio> {
    check_shape(point, d)?;
    let kn = log_kn(d, mode)?;
    let ln = log_ln(point, d)?;
    if ln.is_outside_support() {
        return Ok(ln);
    }
    Ok(LogRatio::finite(kn.log_kn + ln.value()))
}

/// Precomputed `ln K_n` for repeated evaluation at many points.
#[derive(Clone, Copy, Debug)]
pub struct RatioEvaluator {
    dims: Dims,
    log_kn: f64,
}

impl RatioEvaluator {
    pub fn new(d: Dims, mode: KnMode) -> Result<Self> {
        Ok(Self {
            dims: d,
            log_kn: log_kn(d, mode)?.log_kn,
        })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn eval(&self, point: &RealMatrix) -> Result<LogRatio> {
        let ln = log_ln(point, self.dims)?;
        if ln.is_outside_support() {
            return Ok(ln);
        }
        Ok(LogRatio::finite(self.log_kn + ln.value()))
    }
}

/// `K'_n = K_n (1 − p/n)^{c_n q}` and `L'_n = L_n (1 − p/n)^{−c_n q}`, in logs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrimedParts {
    pub log_kn_prime: f64,
    pub log_ln_prime: f64,
}

impl PrimedParts {
    pub fn total(&self) -> f64 {
        self.log_kn_prime + self.log_ln_prime
    }
}

pub fn log_kn_prime_and_ln_prime(point: &RealMatrix, d: Dims) -> Result<PrimedParts> {
    check_shape(point, d)?;
    let kn = log_kn_exact(d)?;
    let c = d.canonical();
    let shift = kn.c_n * c.q() as f64 * (-(c.p() as f64) / c.n() as f64).ln_1p();
    let ln = log_ln(point, d)?;
    Ok(PrimedParts {
        log_kn_prime: kn.log_kn + shift,
        log_ln_prime: ln.value() - shift,
    })
}
