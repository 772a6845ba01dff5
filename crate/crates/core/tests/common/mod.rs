//! Brute-force oracles shared by the integration tests. Nothing here calls the
//! closed forms under test.
#![allow(dead_code)]

use haargauss::moments::{dirichlet_moment, entry_monomial_moment, ExactRational, MonomialPattern};

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut pp;
        loop {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=m {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            pp = m as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite Gauss–Legendre rule on [a, b].
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        total += x.iter().zip(&w).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h;
    }
    total
}

/// Normalized Hermite recurrence at `z`: returns `(p_m(z), p_{m-1}(z))`.
fn hermite_pair(m: usize, z: f64) -> (f64, f64) {
    let (mut p1, mut p2) = (std::f64::consts::PI.powf(-0.25), 0.0);
    for j in 0..m {
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / (j + 1) as f64).sqrt() * p2 - (j as f64 / (j + 1) as f64).sqrt() * p3;
    }
    (p1, p2)
}

/// Gauss–Hermite nodes and weights for the weight `exp(-x²)`. Roots are
/// bracketed by a sign scan and bisected.
pub fn gauss_hermite(m: usize) -> (Vec<f64>, Vec<f64>) {
    let weight = |z: f64| {
        let pp = (2.0 * m as f64).sqrt() * hermite_pair(m, z).1;
        2.0 / (pp * pp)
    };
    let top = (2.0 * m as f64 + 1.0).sqrt() + 1.0;
    let steps = 200 * m;
    let h = top / steps as f64;
    let mut pos = Vec::new();
    let mut a = 0.5 * h;
    let mut fa = hermite_pair(m, a).0;
    for k in 1..=steps {
        let b = 0.5 * h + k as f64 * h;
        let fb = hermite_pair(m, b).0;
        if fa.signum() != fb.signum() {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let fm = hermite_pair(m, mid).0;
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            pos.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    let mut x: Vec<f64> = pos.iter().rev().map(|z| -z).collect();
    if m % 2 == 1 {
        x.push(0.0);
    }
    x.extend(pos.iter());
    assert_eq!(x.len(), m, "Hermite root scan missed roots");
    let w = x.iter().map(|&z| weight(z)).collect();
    (x, w)
}

/// `E f(g)` for `g ~ N(0, 1)` by Gauss–Hermite quadrature.
pub fn gaussian_expectation(f: impl Fn(f64) -> f64, m: usize) -> f64 {
    let (x, w) = gauss_hermite(m);
    let s = std::f64::consts::SQRT_2;
    x.iter().zip(&w).map(|(x, w)| w * f(s * x)).sum::<f64>() / std::f64::consts::PI.sqrt()
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `E|e^ξ − 1|` for `ξ ~ N(−σ²/8, σ²/4)`, split at the kink and integrated with
/// composite Gauss–Legendre panels.
pub fn tv_limit_by_quadrature(sigma: f64) -> f64 {
    let s = 0.5 * sigma;
    let f = |z: f64| ((-0.5 * s * s + s * z).exp() - 1.0).abs() * std_normal_pdf(z);
    let kink = 0.5 * s;
    integrate(f, -40.0, kink, 400, 20) + integrate(f, kink, 40.0, 400, 20)
}

/// The same target by plain Gauss–Hermite, which converges slowly across the kink.
pub fn tv_limit_by_hermite(sigma: f64, m: usize) -> f64 {
    let s = 0.5 * sigma;
    gaussian_expectation(|z| ((-0.5 * s * s + s * z).exp() - 1.0).abs(), m)
}

/// Average of `f` over Haar measure on O(2): rotations and reflections, each
/// with a uniform angle. Exact for trigonometric polynomials of degree < `m`.
pub fn o2_average(f: impl Fn(&[[f64; 2]; 2]) -> f64, m: usize) -> f64 {
    let mut total = 0.0;
    for k in 0..m {
        let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        let (s, c) = t.sin_cos();
        total += f(&[[c, -s], [s, c]]);
        total += f(&[[c, s], [s, -c]]);
    }
    total / (2 * m) as f64
}

/// Restricted growth strings of length `k`: one per set partition.
pub fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            prefix.push(b);
            rec(prefix, k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), k, &mut out);
    out
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

type Dense = Vec<Vec<u32>>;

fn dense_of(pat: MonomialPattern) -> Dense {
    let e = pat.exponents();
    let rows = e.iter().map(|((r, _), _)| r + 1).max().unwrap();
    let cols = e.iter().map(|((_, c), _)| c + 1).max().unwrap();
    let mut m = vec![vec![0; cols]; rows];
    for ((r, c), k) in e {
        m[*r][*c] = *k;
    }
    m
}

fn transpose(m: &Dense) -> Dense {
    (0..m[0].len()).map(|c| m.iter().map(|row| row[c]).collect()).collect()
}

fn equivalent(a: &Dense, b: &Dense) -> bool {
    if a.len() != b.len() || a[0].len() != b[0].len() {
        return false;
    }
    let cp = permutations(a[0].len());
    permutations(a.len()).iter().any(|rp| {
        cp.iter().any(|cp| {
            (0..a.len()).all(|r| (0..a[0].len()).all(|c| a[rp[r]][cp[c]] == b[r][c]))
        })
    })
}

/// `E Π γ_{rc}^{m_rc}` for an `n × n` Haar matrix, by symmetry reduction onto
/// the tabulated monomials. `None` when the monomial is not covered.
pub fn monomial_expectation(m: &Dense, n: usize) -> Option<ExactRational> {
    let row_deg: Vec<u32> = m.iter().map(|r| r.iter().sum()).collect();
    let col_deg: Vec<u32> = (0..m[0].len()).map(|c| m.iter().map(|r| r[c]).sum()).collect();
    if row_deg.iter().chain(&col_deg).any(|d| d % 2 == 1) {
        return Some(ExactRational::zero());
    }
    let trimmed: Dense = m
        .iter()
        .filter(|r| r.iter().any(|&v| v > 0))
        .map(|r| (0..m[0].len()).filter(|&c| col_deg[c] > 0).map(|c| r[c]).collect())
        .collect();
    if trimmed.len() == 1 || trimmed[0].len() == 1 {
        let exps: Vec<u32> = trimmed.iter().flatten().map(|e| e / 2).collect();
        return dirichlet_moment(n, &exps).ok();
    }
    let t = transpose(&trimmed);
    MonomialPattern::ALL.iter().find_map(|&pat| {
        let d = dense_of(pat);
        if equivalent(&trimmed, &d) || equivalent(&t, &d) {
            entry_monomial_moment(pat, n).ok()
        } else {
            None
        }
    })
}

fn falling(x: usize, k: usize) -> u64 {
    if k > x {
        return 0;
    }
    (0..k).map(|i| (x - i) as u64).product()
}

/// `E tr[(Z'Z)ᵏ]` assembled from entry monomials of the Haar matrix: the sum
/// over set partitions of the row and column indices of the closed walk.
pub fn trace_moment_by_monomials(k: usize, n: usize, p: usize, q: usize) -> Result<ExactRational, String> {
    let mut total = ExactRational::zero();
    for a in set_partitions(k) {
        let r = a.iter().max().unwrap() + 1;
        let wa = falling(p, r);
        if wa == 0 {
            continue;
        }
        for b in set_partitions(k) {
            let s = b.iter().max().unwrap() + 1;
            let wb = falling(q, s);
            if wb == 0 {
                continue;
            }
            let mut m = vec![vec![0u32; s]; r];
            for t in 0..k {
                m[a[t]][b[t]] += 1;
                m[a[(t + 1) % k]][b[t]] += 1;
            }
            let e = monomial_expectation(&m, n)
                .ok_or_else(|| format!("monomial {m:?} not covered by the tabulated patterns"))?;
            total = total + ExactRational::from_integer(wa) * ExactRational::from_integer(wb) * e;
        }
    }
    Ok(total)
}

/// Mean and standard error of a slice (independent of the library helper).
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Sample variance with a standard error from the fourth central moment.
pub fn variance_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    (var, ((m4 - var * var) / n).sqrt())
}

/// Sample covariance with a standard error from the products of deviations.
pub fn covariance_se(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let prods: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let (m, se) = mean_se(&prods);
    (m * n / (n - 1.0), se)
}
