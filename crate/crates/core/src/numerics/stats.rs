//! Summation, sample summaries, goodness of fit and histograms.

use crate::error::{Error, Result};

const PAIRWISE_LEAF: usize = 16;

/// Sum with a fixed binary tree (leaves of 16 summed left to right). The
/// result depends only on the order of `xs`, never on how it was produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Sample mean and its standard error `s / √N` (unbiased sample variance).
pub fn mean_and_std_error(xs: &[f64]) -> Result<(f64, f64)> {
    if xs.len() < 2 {
        return Err(Error::Domain(format!(
            "need at least two replicates, got {}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Unbiased sample variance.
pub fn sample_variance(xs: &[f64]) -> Result<f64> {
    let (_, se) = mean_and_std_error(xs)?;
    Ok(se * se * xs.len() as f64)
}

/// Empirical `level`-quantile (type 7, linear interpolation).
pub fn quantile(xs: &[f64], level: f64) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::Domain("quantile of an empty sample".into()));
    }
    if !(0.0..=1.0).contains(&level) {
        return Err(Error::Domain(format!("quantile level {level} outside [0,1]")));
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let h = (v.len() - 1) as f64 * level;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    Ok(v[lo] + (h - lo as f64) * (v[hi] - v[lo]))
}

/// Kolmogorov–Smirnov distance `sup |F_N − F|`, evaluated on both sides of
/// every jump of the empirical CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("KS statistic of an empty sample".into()));
    }
    let mut v = samples.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Equal-width bins on `[lo, hi)` plus underflow and overflow counters.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 || !(hi > lo) {
            return Err(Error::Domain(format!(
                "histogram needs bins > 0 and hi > lo, got {bins} bins on [{lo}, {hi})"
            )));
        }
        Ok(Self {
            lo,
            hi,
            counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
        })
    }

    pub fn from_samples(lo: f64, hi: f64, bins: usize, xs: &[f64]) -> Result<Self> {
        let mut h = Self::new(lo, hi, bins)?;
        for &x in xs {
            h.add(x);
        }
        Ok(h)
    }

    pub fn add(&mut self, x: f64) {
        if x < self.lo {
            self.underflow += 1;
        } else if x >= self.hi {
            self.overflow += 1;
        } else {
            let k = ((x - self.lo) / self.width()) as usize;
            let last = self.counts.len() - 1;
            self.counts[k.min(last)] += 1;
        }
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }

    pub fn center(&self, k: usize) -> f64 {
        self.lo + (k as f64 + 0.5) * self.width()
    }

    /// Bar heights normalized by the total count (overflow included), so
    /// they estimate the sampled density.
    pub fn densities(&self) -> Vec<f64> {
        let norm = self.total() as f64 * self.width();
        self.counts.iter().map(|&c| c as f64 / norm).collect()
    }
}
