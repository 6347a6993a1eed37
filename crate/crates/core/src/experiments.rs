//! Monte Carlo studies connecting `Y_n / n` to the limit law.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{expected_moves_mahmoud, expected_total_swaps_f64, rational_to_f64};
use crate::limit::CdfGrid;
use crate::quickselect::run_random_in;
use crate::rng::{tags, try_chunked, StreamRng};

/// Kolmogorov–Smirnov distance between the empirical law of `samples` and the
/// interpolated `cdf`.
///
/// The supremum is attained at a jump of the empirical CDF, so it is checked
/// just before and at every distinct sample value; ties are grouped.
pub fn ks_distance_empirical(samples: &[f64], cdf: &CdfGrid) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("no samples".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        let f = cdf.eval(v);
        let below = i as f64 / n;
        let at = j as f64 / n;
        worst = worst.max((f - below).abs()).max((at - f).abs());
        i = j;
    }
    Ok(worst)
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut worst = 0.0f64;
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] == v {
            i += 1;
        }
        while j < b.len() && b[j] == v {
            j += 1;
        }
        worst = worst.max((i as f64 / na - j as f64 / nb).abs());
    }
    worst
}

/// Exchange counts of `runs` independent random Quickselect executions on
/// size `n`, in stream order.
pub fn simulate_exchanges(n: usize, runs: usize, seed: u64, tag: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    try_chunked(seed, tag, runs, {
        move |rng: &mut StreamRng| {
            // Buffers are per call; the shuffle dominates the allocation.
            let mut buffer = Vec::with_capacity(n);
            run_random_in(n, rng, &mut buffer).map(|r| r.exchanges)
        }
    })
}

fn mean_var(values: impl Iterator<Item = f64> + Clone) -> (f64, f64, usize) {
    let count = values.clone().count();
    let n = count as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var, count)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub runs: usize,
    pub ks_to_limit: f64,
    pub mean_normalized: f64,
    /// `n * Var(Y_n / n)`.
    pub var_normalized_times_n: f64,
    /// Standard error of `mean_normalized`.
    pub mean_std_error: f64,
    #[serde(skip)]
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Rows with timing stripped, for reproducibility comparisons.
    pub fn without_timing(&self) -> Vec<ConvergenceRow> {
        self.rows.iter().map(|r| ConvergenceRow { wall_time: 0.0, ..r.clone() }).collect()
    }
}

/// For each `n` (sorted ascending) simulates `runs` executions and compares
/// `Y_n / n` with the limit law.
pub fn convergence_study(
    n_list: &[usize],
    runs: usize,
    seed: u64,
    cdf: &CdfGrid,
) -> Result<ConvergenceReport> {
    if runs < 1000 {
        return Err(Error::Domain(format!("runs must be at least 1000, got {runs}")));
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut rows = Vec::with_capacity(ns.len());
    for (index, &n) in ns.iter().enumerate() {
        if n < 2 {
            return Err(Error::Domain(format!("each n must be at least 2, got {n}")));
        }
        let start = Instant::now();
        let tag = tags::CONVERGENCE | ((index as u64) << 32);
        let normalized: Vec<f64> = simulate_exchanges(n, runs, seed, tag)?
            .into_iter()
            .map(|y| y as f64 / n as f64)
            .collect();
        let ks_to_limit = ks_distance_empirical(&normalized, cdf)?;
        let (mean, var, _) = mean_var(normalized.iter().copied());
        rows.push(ConvergenceRow {
            n,
            runs,
            ks_to_limit,
            mean_normalized: mean,
            var_normalized_times_n: n as f64 * var,
            mean_std_error: (var / runs as f64).sqrt(),
            wall_time: start.elapsed().as_secs_f64(),
        });
    }
    Ok(ConvergenceReport { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceScaling {
    pub n: usize,
    pub runs: usize,
    /// Sample variance of `Y_n` over `n^2`.
    pub value: f64,
    /// Approximate standard error of `value` from the fourth central moment.
    pub std_error: f64,
}

/// Sample variance of `Y_n` divided by `n^2`.
pub fn variance_scaling(n: usize, runs: usize, seed: u64) -> Result<VarianceScaling> {
    if n < 2 || runs < 2 {
        return Err(Error::Domain(format!("need n >= 2 and runs >= 2, got n = {n}, runs = {runs}")));
    }
    let ys: Vec<f64> = simulate_exchanges(n, runs, seed, tags::VARIANCE)?
        .into_iter()
        .map(|y| y as f64 / n as f64)
        .collect();
    Ok(variance_with_error(n, &ys))
}

fn variance_with_error(n: usize, normalized: &[f64]) -> VarianceScaling {
    let (mean, var, runs) = mean_var(normalized.iter().copied());
    let m4 = normalized.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / runs as f64;
    let std_error = ((m4 - var * var) / runs as f64).max(0.0).sqrt();
    VarianceScaling { n, runs, value: var, std_error }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MovesRow {
    pub n: usize,
    /// Mahmoud's exact `E[M_n]`.
    pub expected_moves: f64,
    /// `2 E[Y_n]` from the exact recurrence.
    pub twice_expected_exchanges: f64,
    pub difference: f64,
    pub difference_over_n: f64,
    /// Monte Carlo `Var(2 Y_n) / n^2`.
    pub var_twice_exchanges_over_n2: f64,
    pub var_std_error: f64,
}

/// Asymptotic constant of `Var(M_n) / n^2` and the bracket for it.
pub const MOVES_VARIANCE_SHARP: f64 = 1.0 / 15.0;
pub const MOVES_VARIANCE_BAND: (f64, f64) = (1.0 / 15.0, 41.0 / 15.0);

/// Compares the mean of the data-move count with twice the exchange count,
/// and estimates `Var(2 Y_n) / n^2` for comparison with the move variance.
pub fn moves_vs_exchanges_report(n_list: &[usize], runs: usize, seed: u64) -> Result<Vec<MovesRow>> {
    if n_list.is_empty() {
        return Err(Error::Domain("n_list is empty".into()));
    }
    let n_max = *n_list.iter().max().unwrap_or(&1);
    let e_y = expected_total_swaps_f64(n_max);
    n_list
        .iter()
        .enumerate()
        .map(|(index, &n)| {
            let moves = rational_to_f64(&expected_moves_mahmoud(n)?);
            let twice = 2.0 * e_y[n];
            let (var, se) = if runs >= 2 && n >= 2 {
                let tag = tags::MOVES | ((index as u64) << 32);
                let ys: Vec<f64> = simulate_exchanges(n, runs, seed, tag)?
                    .into_iter()
                    .map(|y| 2.0 * y as f64 / n as f64)
                    .collect();
                let v = variance_with_error(n, &ys);
                (v.value, v.std_error)
            } else {
                (f64::NAN, f64::NAN)
            };
            Ok(MovesRow {
                n,
                expected_moves: moves,
                twice_expected_exchanges: twice,
                difference: moves - twice,
                difference_over_n: (moves - twice) / n as f64,
                var_twice_exchanges_over_n2: var,
                var_std_error: se,
            })
        })
        .collect()
}
