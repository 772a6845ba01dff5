//! Exact moment formulas in arbitrary-precision rational arithmetic.
//!
//! Everything here is evaluated in `BigRational`; conversion to `f64` happens
//! only through [`ExactRational::to_f64`].

use crate::error::{Error, Result};
use crate::sampling::Dims;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A reduced rational with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Self(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with 17 significant digits.
    pub fn to_decimal17(&self) -> String {
        format!("{:.16e}", self.to_f64())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        Ok(Self(self.0.recip()))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for ExactRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
// Division by an exact zero panics, as for the underlying BigRational.
binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |a, b| a + b)
    }
}

fn int(v: i64) -> ExactRational {
    ExactRational::from_integer(v)
}

fn uint(v: usize) -> ExactRational {
    ExactRational::from_integer(v as u64)
}

fn frac(num: ExactRational, den: ExactRational) -> ExactRational {
    num / den
}

/// `(2a − 1)!!` with `(−1)!! = 1`.
pub fn odd_double_factorial(a: u32) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = 1u64;
    while k < 2 * a as u64 {
        acc *= k;
        k += 2;
    }
    acc
}

/// `E(U₁^{a₁} ··· U_m^{a_m})` for `(U₁, …, U_m)` uniform on the unit sphere
/// squared coordinates:
///
/// `∏(2aᵢ − 1)!! / ∏_{i=1}^{a} (m + 2i − 2)` with `a = Σaᵢ`.
///
/// `a` may be shorter than `m`; missing exponents are zero.
pub fn dirichlet_moment(m: usize, a: &[u32]) -> Result<ExactRational> {
    if m < 2 {
        return Err(Error::Domain(format!("dirichlet_moment needs m >= 2, got {m}")));
    }
    if a.len() > m {
        return Err(Error::Domain(format!(
            "{} exponents supplied for m = {m}",
            a.len()
        )));
    }
    let mut num = BigInt::one();
    for &ai in a {
        num *= odd_double_factorial(ai);
    }
    let total: u64 = a.iter().map(|&x| x as u64).sum();
    let mut den = BigInt::one();
    for i in 1..=total {
        den *= BigInt::from(m as u64 + 2 * i - 2);
    }
    ExactRational::new(num, den)
}

/// Monomials in the entries `γᵢⱼ` of a Haar orthogonal matrix with known
/// closed-form expectations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[allow(non_camel_case_types)]
pub enum MonomialPattern {
    /// `γ₁₁²`
    G11_SQ,
    /// `γ₁₁⁴`
    G11_4,
    /// `γ₁₁²γ₁₂²`
    G11SQ_G12SQ,
    /// `γ₁₁²γ₂₂²`
    G11SQ_G22SQ,
    /// `γ₁₁γ₁₂γ₂₁γ₂₂`
    CYCLE4,
    /// `γ₁₁²γ₂₁²γ₃₁²`
    TRIPLE_COL,
    /// `γ₁₁γ₁₂γ₂₁γ₂₂γ₂₃²`
    CYCLE4_G23SQ,
    /// `γ₁₁²γ₂₁²γ₂₂²`
    G11SQ_G21SQ_G22SQ,
    /// `γ₁₁γ₁₂γ₂₁γ₂₂³`
    CYCLE4_G22CUBE,
    /// `γ₁₁γ₁₂γ₂₂γ₂₃γ₃₃γ₃₁`
    CYCLE6,
}

impl MonomialPattern {
    pub const ALL: [MonomialPattern; 10] = [
        Self::G11_SQ,
        Self::G11_4,
        Self::G11SQ_G12SQ,
        Self::G11SQ_G22SQ,
        Self::CYCLE4,
        Self::TRIPLE_COL,
        Self::CYCLE4_G23SQ,
        Self::G11SQ_G21SQ_G22SQ,
        Self::CYCLE4_G22CUBE,
        Self::CYCLE6,
    ];

    /// `((row, col), exponent)` triples, zero-based.
    pub fn exponents(&self) -> &'static [((usize, usize), u32)] {
        use MonomialPattern::*;
        match self {
            G11_SQ => &[((0, 0), 2)],
            G11_4 => &[((0, 0), 4)],
            G11SQ_G12SQ => &[((0, 0), 2), ((0, 1), 2)],
            G11SQ_G22SQ => &[((0, 0), 2), ((1, 1), 2)],
            CYCLE4 => &[((0, 0), 1), ((0, 1), 1), ((1, 0), 1), ((1, 1), 1)],
            TRIPLE_COL => &[((0, 0), 2), ((1, 0), 2), ((2, 0), 2)],
            CYCLE4_G23SQ => &[((0, 0), 1), ((0, 1), 1), ((1, 0), 1), ((1, 1), 1), ((1, 2), 2)],
            G11SQ_G21SQ_G22SQ => &[((0, 0), 2), ((1, 0), 2), ((1, 1), 2)],
            CYCLE4_G22CUBE => &[((0, 0), 1), ((0, 1), 1), ((1, 0), 1), ((1, 1), 3)],
            CYCLE6 => &[
                ((0, 0), 1),
                ((0, 1), 1),
                ((1, 1), 1),
                ((1, 2), 1),
                ((2, 2), 1),
                ((2, 0), 1),
            ],
        }
    }

    /// Smallest `n` for which the monomial fits in an `n × n` matrix.
    pub fn min_n(&self) -> usize {
        let e = self.exponents();
        let rows = e.iter().map(|((r, _), _)| r + 1).max().unwrap_or(1);
        let cols = e.iter().map(|((_, c), _)| c + 1).max().unwrap_or(1);
        rows.max(cols).max(2)
    }

    /// True when all factors sit in one row or one column, so the moment is a
    /// sphere moment.
    pub fn single_line(&self) -> bool {
        let e = self.exponents();
        e.iter().all(|((r, _), _)| *r == e[0].0 .0) || e.iter().all(|((_, c), _)| *c == e[0].0 .1)
    }

    /// Evaluates the monomial on a matrix accessor.
    pub fn evaluate(&self, entry: impl Fn(usize, usize) -> f64) -> f64 {
        self.exponents()
            .iter()
            .map(|&((r, c), k)| entry(r, c).powi(k as i32))
            .product()
    }
}

/// Expectation of a [`MonomialPattern`] for an `n × n` Haar orthogonal matrix.
pub fn entry_monomial_moment(pat: MonomialPattern, n: usize) -> Result<ExactRational> {
    use MonomialPattern::*;
    if n < pat.min_n() {
        return Err(Error::Domain(format!(
            "{pat:?} needs n >= {}, got {n}",
            pat.min_n()
        )));
    }
    let nn = uint(n);
    let n1 = &nn - &int(1);
    let n2 = &nn - &int(2);
    let p2 = &nn + &int(2);
    let p4 = &nn + &int(4);
    let v = match pat {
        G11_SQ => frac(int(1), nn),
        G11_4 => frac(int(3), &nn * &p2),
        G11SQ_G12SQ => frac(int(1), &nn * &p2),
        G11SQ_G22SQ => frac(&nn + &int(1), &(&nn * &n1) * &p2),
        CYCLE4 => -frac(int(1), &(&nn * &n1) * &p2),
        TRIPLE_COL => frac(int(1), &(&nn * &p2) * &p4),
        CYCLE4_G23SQ => -frac(int(1), &(&(&n1 * &nn) * &p2) * &p4),
        G11SQ_G21SQ_G22SQ => {
            let base = &(&n1 * &nn) * &p2;
            frac(int(1), base.clone()) - frac(int(3), &base * &p4)
        }
        CYCLE4_G22CUBE => -frac(int(3), &(&(&n1 * &nn) * &p2) * &p4),
        CYCLE6 => frac(int(2), &(&(&(&n2 * &n1) * &nn) * &p2) * &p4),
    };
    Ok(v)
}

/// `E Σλᵢᵏ = E tr[(Z'Z)ᵏ]` for the `p × q` Haar block, `k ∈ {1, 2, 3}`.
pub fn trace_power_moment(k: u32, d: Dims) -> Result<ExactRational> {
    let n = uint(d.n());
    let p = uint(d.p());
    let q = uint(d.q());
    let pq = &p * &q;
    let one = int(1);
    let pm1q1 = &(&p - &one) * &(&q - &one);
    match k {
        1 => Ok(frac(pq, n)),
        2 => {
            let mut bracket = &(&p + &q) + &one;
            if !pm1q1.is_zero() {
                bracket = bracket - frac(pm1q1, &n - &one);
            }
            Ok(frac(pq, &n * &(&n + &int(2))) * bracket)
        }
        3 => {
            let n2 = &n + &int(2);
            let n4 = &n + &int(4);
            let first_bracket = &(&(&(&p * &p) + &(&q * &q)) + &(&int(3) * &pq))
                + &(&(&int(3) * &(&p + &q)) + &int(4));
            let first = frac(pq.clone(), &(&n * &n2) * &n4) * first_bracket;
            if pm1q1.is_zero() {
                return Ok(first);
            }
            let pm2q2 = &(&p - &int(2)) * &(&q - &int(2));
            let mut bracket = -(&int(3) * &(&p + &q));
            if !pm2q2.is_zero() {
                bracket = bracket + frac(&int(2) * &pm2q2, &n - &int(2));
            }
            let den = &(&(&(&n - &one) * &n) * &n2) * &n4;
            let second = frac(&pq * &pm1q1, den) * bracket;
            Ok(first + second)
        }
        _ => Err(Error::Domain(format!("trace_power_moment supports k in 1..=3, got {k}"))),
    }
}

/// `E(χ²_m)ᵏ = ∏_{l=0}^{k−1} (m + 2l)`.
pub fn chi_square_moment(m: usize, k: u32) -> ExactRational {
    let mut acc = BigInt::one();
    for l in 0..k as u64 {
        acc *= BigInt::from(m as u64 + 2 * l);
    }
    ExactRational::from_integer(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareStats {
    /// `Var χ² = 2m`
    pub var: ExactRational,
    /// `Var (χ² − m)² = 8m(m+6)`
    pub var_sq_centered: ExactRational,
    /// `Var (χ²)² = 8m(m+2)(m+3)`
    pub var_sq: ExactRational,
    /// `E(χ² − m)³ = 8m`
    pub third_central: ExactRational,
    /// `E(χ² − m)⁴ = 12m(m+4)`
    pub fourth_central: ExactRational,
}

pub fn chi_square_central_stats(m: usize) -> ChiSquareStats {
    let m = m as i64;
    ChiSquareStats {
        var: int(2 * m),
        var_sq_centered: int(8 * m) * int(m + 6),
        var_sq: int(8 * m) * int(m + 2) * int(m + 3),
        third_central: int(8 * m),
        fourth_central: int(12 * m) * int(m + 4),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WishartTraceStats {
    /// `E tr[(X'X)²] = pq(p+q+1)`
    pub e_tr2: ExactRational,
    /// `Var tr[(X'X)²] = 4p²q² + 8pq(p+q)² + 20pq(p+q+1)`
    pub var_tr2: ExactRational,
    /// `Cov(tr X'X, tr[(X'X)²]) = 4pq(p+q+1)`
    pub cov_tr_tr2: ExactRational,
}

/// Trace statistics of the Wishart matrix `X'X`, `X` a `p × q` Gaussian block.
pub fn wishart_trace_stats(p: usize, q: usize) -> WishartTraceStats {
    let p = uint(p);
    let q = uint(q);
    let pq = &p * &q;
    let s = &p + &q;
    let s1 = &s + &int(1);
    WishartTraceStats {
        e_tr2: &pq * &s1,
        var_tr2: &(&(&int(4) * &pq) * &pq) + &(&(&(&int(8) * &pq) * &s) * &s)
            + &(&int(20) * &pq) * &s1,
        cov_tr_tr2: &(&int(4) * &pq) * &s1,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaTraceSums {
    /// `Σ_{j=2}^q E tr[(Σ_{j−1})_p]`
    pub sum_e_tr: ExactRational,
    /// `Σ_{j=2}^q E tr[(Σ_{j−1})_p²]`
    pub sum_e_tr2: ExactRational,
}

/// Sums over the Gram–Schmidt projections `Σ_{j−1}` (onto the span of the
/// first `j − 1` orthonormal columns), restricted to the top `p × p` corner.
pub fn sigma_trace_sums(d: Dims) -> SigmaTraceSums {
    if d.q() < 2 {
        return SigmaTraceSums {
            sum_e_tr: ExactRational::zero(),
            sum_e_tr2: ExactRational::zero(),
        };
    }
    let n = uint(d.n());
    let p = uint(d.p());
    let q = uint(d.q());
    let pqq1 = &(&p * &q) * &(&q - &int(1));
    let sum_e_tr = frac(pqq1.clone(), &int(2) * &n);
    let first = frac(&pqq1 * &(&p + &int(2)), &(&int(2) * &n) * &(&n + &int(2)));
    let second = if d.q() == 2 {
        ExactRational::zero()
    } else {
        frac(
            &(&pqq1 * &(&q - &int(2))) * &(&n - &p),
            &(&(&int(3) * &n) * &(&n - &int(1))) * &(&n + &int(2)),
        )
    };
    SigmaTraceSums {
        sum_e_tr,
        sum_e_tr2: first + second,
    }
}

/// `E[(a'y)²(b'y)²] = 2(a'b)² + 1` for unit vectors `a`, `b` and `y ~ N(0, I)`.
pub fn bilinear_fourth_moment(dot_ab: f64) -> Result<f64> {
    if !(dot_ab.abs() <= 1.0) {
        return Err(Error::Domain(format!(
            "a'b must lie in [-1, 1] for unit vectors, got {dot_ab}"
        )));
    }
    Ok(2.0 * dot_ab * dot_ab + 1.0)
}

/// Ranges swept by [`exact_identity_suite`].
#[derive(Clone, Copy, Debug)]
pub struct IdentitySuiteLimits {
    pub normalization_max_n: usize,
    pub sum_rule_max_n: usize,
    pub trace_max_n: usize,
}

impl Default for IdentitySuiteLimits {
    fn default() -> Self {
        Self {
            normalization_max_n: 1_000_000,
            sum_rule_max_n: 10_000,
            trace_max_n: 10_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    /// First failing case, if any.
    pub detail: Option<String>,
}

fn sweep(name: &str, range: impl Iterator<Item = usize>, f: impl Fn(usize) -> Result<bool>) -> IdentityCheck {
    let mut cases = 0;
    for n in range {
        cases += 1;
        match f(n) {
            Ok(true) => {}
            Ok(false) => {
                return IdentityCheck {
                    name: name.into(),
                    cases,
                    passed: false,
                    detail: Some(format!("fails at n={n}")),
                }
            }
            Err(e) => {
                return IdentityCheck {
                    name: name.into(),
                    cases,
                    passed: false,
                    detail: Some(format!("error at n={n}: {e}")),
                }
            }
        }
    }
    IdentityCheck {
        name: name.into(),
        cases,
        passed: true,
        detail: None,
    }
}

/// Exact-equality checks tying the moment formulas to each other.
pub fn exact_identity_suite(limits: IdentitySuiteLimits) -> Vec<IdentityCheck> {
    use MonomialPattern::*;
    let one = ExactRational::one();
    let mut out = Vec::new();

    // A row of an orthogonal matrix has unit norm.
    out.push(sweep("normalization n*E[g11^2] = 1", 2..=limits.normalization_max_n, |n| {
        Ok(uint(n) * entry_monomial_moment(G11_SQ, n)? == one)
    }));

    // Multiply the row-norm identity by g11^2.
    out.push(sweep(
        "fourth-moment rule E[g11^4] + (n-1)E[g11^2 g12^2] = E[g11^2]",
        2..=limits.sum_rule_max_n,
        |n| {
            let lhs = entry_monomial_moment(G11_4, n)?
                + uint(n - 1) * entry_monomial_moment(G11SQ_G12SQ, n)?;
            Ok(lhs == entry_monomial_moment(G11_SQ, n)?)
        },
    ));

    // Rows 1 and 2 are orthogonal: multiply sum_k g1k g2k = 0 by g11 g21.
    out.push(sweep(
        "orthogonality rule n*E[g11^2 g12^2] + n(n-1)E[cycle4] = 0",
        2..=limits.sum_rule_max_n,
        |n| {
            let lhs = uint(n) * entry_monomial_moment(G11SQ_G12SQ, n)?
                + uint(n) * uint(n - 1) * entry_monomial_moment(CYCLE4, n)?;
            Ok(lhs.is_zero())
        },
    ));

    for pat in MonomialPattern::ALL.iter().filter(|p| p.single_line()) {
        let name = format!("Dirichlet consistency for {pat:?}");
        out.push(sweep(&name, pat.min_n()..=limits.sum_rule_max_n, |n| {
            let exps: Vec<u32> = pat.exponents().iter().map(|&(_, k)| k / 2).collect();
            Ok(entry_monomial_moment(*pat, n)? == dirichlet_moment(n, &exps)?)
        }));
    }

    for k in 1..=3u32 {
        let name = format!("trace identity E tr[(Z'Z)^{k}] = n when p = q = n");
        out.push(sweep(&name, 3..=limits.trace_max_n, |n| {
            Ok(trace_power_moment(k, Dims::new(n, n, n)?)? == uint(n))
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> ExactRational {
        ExactRational::new(a, b).unwrap()
    }

    fn dims(n: usize, p: usize, q: usize) -> Dims {
        Dims::new(n, p, q).unwrap()
    }

    #[test]
    fn rational_basics() {
        let x = r(6, -4);
        assert_eq!(x.to_string(), "-3/2");
        assert!(ExactRational::new(1, 0).is_err());
        assert_eq!(x.to_f64(), -1.5);
        assert_eq!(r(1, 3).to_decimal17(), "3.3333333333333331e-1");
    }

    #[test]
    fn double_factorial() {
        assert_eq!(odd_double_factorial(0), BigInt::from(1));
        assert_eq!(odd_double_factorial(1), BigInt::from(1));
        assert_eq!(odd_double_factorial(3), BigInt::from(15));
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet_moment(7, &[1]).unwrap(), r(1, 7));
        assert_eq!(dirichlet_moment(2, &[1, 1]).unwrap(), r(1, 8));
        assert_eq!(dirichlet_moment(3, &[1, 1, 1]).unwrap(), r(1, 105));
        assert!(dirichlet_moment(1, &[1]).is_err());
        assert!(dirichlet_moment(2, &[1, 1, 1]).is_err());
    }

    #[test]
    fn monomial_examples() {
        use MonomialPattern::*;
        assert_eq!(entry_monomial_moment(G11_SQ, 4).unwrap(), r(1, 4));
        assert_eq!(entry_monomial_moment(G11_4, 2).unwrap(), r(3, 8));
        assert_eq!(entry_monomial_moment(CYCLE4, 3).unwrap(), r(-1, 30));
        assert_eq!(entry_monomial_moment(CYCLE6, 3).unwrap(), r(1, 105));
        assert!(entry_monomial_moment(CYCLE6, 2).is_err());
        assert!(entry_monomial_moment(TRIPLE_COL, 2).is_err());
        assert!(entry_monomial_moment(G11_SQ, 1).is_err());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace_power_moment(1, dims(10, 2, 3)).unwrap(), r(3, 5));
        assert_eq!(trace_power_moment(2, dims(10, 2, 3)).unwrap(), r(13, 45));
        assert_eq!(trace_power_moment(2, dims(2, 2, 2)).unwrap(), r(2, 1));
        assert_eq!(trace_power_moment(3, dims(2, 2, 2)).unwrap(), r(2, 1));
        assert_eq!(trace_power_moment(3, dims(1, 1, 1)).unwrap(), r(1, 1));
        assert!(trace_power_moment(4, dims(5, 2, 2)).is_err());
    }

    #[test]
    fn chi_square_examples() {
        assert_eq!(chi_square_moment(1, 2), r(3, 1));
        assert_eq!(chi_square_moment(3, 2), r(15, 1));
        assert_eq!(chi_square_moment(5, 1), r(5, 1));
        let s = chi_square_central_stats(1);
        assert_eq!(s.var_sq_centered, r(56, 1));
        assert_eq!(s.third_central, r(8, 1));
        assert_eq!(chi_square_central_stats(2).var_sq, r(320, 1));
    }

    #[test]
    fn wishart_examples() {
        let w = wishart_trace_stats(1, 1);
        assert_eq!(w.e_tr2, r(3, 1));
        assert_eq!(w.var_tr2, r(96, 1));
        assert_eq!(w.cov_tr_tr2, r(12, 1));
    }

    #[test]
    fn sigma_examples() {
        let s = sigma_trace_sums(dims(10, 4, 1));
        assert!(s.sum_e_tr.is_zero() && s.sum_e_tr2.is_zero());
        assert_eq!(sigma_trace_sums(dims(10, 2, 2)).sum_e_tr, r(1, 5));
        for (n, p) in [(10, 2), (7, 7), (50, 5)] {
            let got = sigma_trace_sums(dims(n, p, 2)).sum_e_tr2;
            let u = dirichlet_moment(n, &[2u32]).unwrap();
            // E u² for u = sum of p squared coordinates: p E U1² + p(p−1) E U1U2
            let cross = dirichlet_moment(n, &[1, 1]).unwrap();
            let want = uint(p) * u + uint(p) * uint(p - 1) * cross;
            assert_eq!(got, want);
            assert_eq!(got, frac(uint(p * (p + 2)), uint(n * (n + 2))));
        }
    }

    #[test]
    fn bilinear_examples() {
        assert_eq!(bilinear_fourth_moment(1.0).unwrap(), 3.0);
        assert_eq!(bilinear_fourth_moment(0.0).unwrap(), 1.0);
        assert_eq!(bilinear_fourth_moment(0.5).unwrap(), 1.5);
        assert!(bilinear_fourth_moment(1.01).is_err());
    }

    #[test]
    fn identity_suite_small() {
        let limits = IdentitySuiteLimits {
            normalization_max_n: 500,
            sum_rule_max_n: 200,
            trace_max_n: 200,
        };
        for c in exact_identity_suite(limits) {
            assert!(c.passed, "{} {:?}", c.name, c.detail);
        }
    }
}
