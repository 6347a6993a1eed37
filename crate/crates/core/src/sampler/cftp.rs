use rand::Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{coalescence_prob, quantile_g_inv};
use crate::error::{Error, Result};
use crate::experiments::ks_two_sample;
use crate::limit::{kernel_cdf, kernel_support_end};
use crate::rng::{chunked, tags, try_chunked, uniform};

/// One exact draw from the limit law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitSample {
    pub value: f64,
    /// Backward coalescence time, geometric on `{1, 2, ...}` with success
    /// probability `alpha / 8`.
    pub tau: u64,
    /// Uniforms consumed: one for `tau`, one for the coalesced state and one
    /// per residual update.
    pub draws_used: u64,
}

/// Geometric number of trials up to and including the first success, by
/// inversion of a single uniform.
fn geometric<R: Rng + ?Sized>(rng: &mut R, p: f64) -> u64 {
    let v = 1.0 - uniform(rng);
    1 + (v.ln() / (-p).ln_1p()).floor() as u64
}

/// The coupler's update `Phi(x, b, u) = b (u/8 + 1/8) + (1 - b) G_x^{-1}(u)`.
pub fn multigamma_update(x: f64, coalesce: bool, u: f64) -> Result<f64> {
    if coalesce {
        Ok(0.125 * u + 0.125)
    } else {
        quantile_g_inv(x, u)
    }
}

/// Draws one exact sample by coupling from the past.
///
/// Looking backwards from time 0, `tau` counts steps up to and including the
/// first one whose coin says "coalesce"; that step sets every chain to a
/// common uniform on `(1/8, 1/4)` and the remaining `tau - 1` steps up to
/// time 0 are residual updates.
pub fn cftp_sample<R: Rng + ?Sized>(rng: &mut R) -> Result<LimitSample> {
    let tau = geometric(rng, coalescence_prob());
    let mut x = 0.125 * uniform(rng) + 0.125;
    for _ in 1..tau {
        x = quantile_g_inv(x, uniform(rng))?;
    }
    Ok(LimitSample { value: x, tau, draws_used: tau + 1 })
}

/// `count` samples drawn from independent streams of `seed`, in a fixed
/// order regardless of thread count.
pub fn sample_many(count: usize, seed: u64) -> Result<Vec<LimitSample>> {
    try_chunked(seed, tags::CFTP, count, cftp_sample)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    pub mean_tau: f64,
}

impl SampleSummary {
    pub fn of(samples: &[LimitSample]) -> Self {
        let count = samples.len();
        let n = count as f64;
        let mean = samples.iter().map(|s| s.value).sum::<f64>() / n;
        let variance =
            samples.iter().map(|s| (s.value - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        let min = samples.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
        let max = samples.iter().map(|s| s.value).fold(f64::NEG_INFINITY, f64::max);
        let mean_tau = samples.iter().map(|s| s.tau as f64).sum::<f64>() / n;
        Self { count, mean, variance, min, max, mean_tau }
    }
}

/// Two-sample comparison of coupler updates against direct one-step draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelCheck {
    pub x: f64,
    pub runs: usize,
    pub ks: f64,
    /// Asymptotic two-sample critical value at significance 0.001.
    pub threshold: f64,
}

impl KernelCheck {
    pub fn passed(&self) -> bool {
        self.ks < self.threshold
    }
}

/// Asymptotic two-sample KS critical value `sqrt(-ln(level/2)/2) * sqrt((n+m)/(nm))`.
pub(crate) fn ks_two_sample_critical(level: f64, n: usize, m: usize) -> f64 {
    let c = (-(0.5 * level).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

fn multigamma_draws(x: f64, runs: usize, seed: u64) -> Result<Vec<f64>> {
    let p = coalescence_prob();
    try_chunked(seed, tags::KERNEL_MULTIGAMMA, runs, |rng| {
        let coalesce = uniform(rng) < p;
        multigamma_update(x, coalesce, uniform(rng))
    })
}

pub fn kernel_update_check(x: f64, runs: usize, seed: u64) -> Result<KernelCheck> {
    if !(0.0..=1.0).contains(&x) || runs == 0 {
        return Err(Error::Domain(format!("need x in [0, 1] and runs > 0, got x = {x}, runs = {runs}")));
    }
    let updates = multigamma_draws(x, runs, seed)?;
    let direct = chunked(seed, tags::KERNEL_DIRECT, runs, |rng| {
        let s = uniform(rng).sqrt();
        s * x + s * (1.0 - s)
    });
    Ok(KernelCheck {
        x,
        runs,
        ks: ks_two_sample(updates, direct),
        threshold: ks_two_sample_critical(0.001, runs, runs),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareCheck {
    pub statistic: f64,
    pub dof: usize,
    /// Upper 0.001 quantile of the chi-square law with `dof` degrees.
    pub critical: f64,
}

impl ChiSquareCheck {
    pub fn passed(&self) -> bool {
        self.statistic < self.critical
    }
}

/// Pearson goodness of fit of coupler updates against the one-step law on
/// `bins` equal-width bins over its support.
pub fn kernel_histogram_chi2(x: f64, runs: usize, bins: usize, seed: u64) -> Result<ChiSquareCheck> {
    if bins < 2 {
        return Err(Error::Domain("need at least two bins".into()));
    }
    let end = kernel_support_end(x);
    let mut counts = vec![0u64; bins];
    for v in multigamma_draws(x, runs, seed)? {
        let b = ((v / end * bins as f64) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let statistic = counts
        .iter()
        .enumerate()
        .map(|(b, &obs)| {
            let lo = end * b as f64 / bins as f64;
            let hi = end * (b + 1) as f64 / bins as f64;
            let expected = runs as f64 * (kernel_cdf(x, hi) - kernel_cdf(x, lo));
            (obs as f64 - expected).powi(2) / expected
        })
        .sum();
    let dof = bins - 1;
    let critical = ChiSquared::new(dof as f64)
        .map_err(|e| Error::Numeric(e.to_string()))?
        .inverse_cdf(0.999);
    Ok(ChiSquareCheck { statistic, dof, critical })
}
