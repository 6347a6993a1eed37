//! Right derivative of the density at 0, `f'(0+) = E[2 / (1 + X)^2]`.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::moments::moments;
use crate::error::{Error, Result};
use crate::sampler::{sample_many, LimitSample};

/// Half-width of the final bracket above which the series estimate is
/// flagged as not stabilized.
const SERIES_STABLE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum DerivativeMethod {
    /// `2 sum_k (-1)^k (k+1) E[X^k]` up to `k_max`.
    Series { k_max: usize },
    /// Average of `2 / (1 + X)^2` over perfect samples.
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RightDerivative {
    pub value: f64,
    /// Half-width of the last partial-sum bracket (series) or three standard
    /// errors (Monte Carlo).
    pub error_bar: f64,
    /// False if the series bracket is still wider than `1e-9` at `k_max`.
    pub stabilized: bool,
}

pub fn right_derivative_at_zero(method: DerivativeMethod) -> Result<RightDerivative> {
    match method {
        DerivativeMethod::Series { k_max } => series(k_max),
        DerivativeMethod::MonteCarlo { samples, seed } => monte_carlo(samples, seed),
    }
}

/// Consecutive partial sums of an alternating series bracket its limit once
/// the terms decrease; the estimate is the midpoint of the last bracket.
fn series(k_max: usize) -> Result<RightDerivative> {
    if k_max < 2 {
        return Err(Error::Domain("series needs k_max >= 2".into()));
    }
    let table = moments(k_max)?;
    let mut partial = BigRational::zero();
    let mut previous = BigRational::zero();
    for (k, m) in table.moments.iter().enumerate() {
        previous = partial.clone();
        let term = m * BigRational::from_integer((2 * (k + 1)).into());
        if k % 2 == 0 {
            partial += term;
        } else {
            partial -= term;
        }
    }
    let hi = partial.to_f64().unwrap_or(f64::NAN);
    let lo = previous.to_f64().unwrap_or(f64::NAN);
    let half = 0.5 * (hi - lo).abs();
    Ok(RightDerivative { value: 0.5 * (hi + lo), error_bar: half, stabilized: half < SERIES_STABLE })
}

fn monte_carlo(samples: usize, seed: u64) -> Result<RightDerivative> {
    if samples < 2 {
        return Err(Error::Domain("Monte Carlo needs at least two samples".into()));
    }
    Ok(right_derivative_from_samples(&sample_many(samples, seed)?))
}

/// Monte Carlo estimate from given perfect samples (at least two).
pub fn right_derivative_from_samples(samples: &[LimitSample]) -> RightDerivative {
    let values: Vec<f64> = samples.iter().map(|s| 2.0 / (1.0 + s.value).powi(2)).collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    RightDerivative { value: mean, error_bar: 3.0 * (var / n).sqrt(), stabilized: true }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_value() {
        let d = right_derivative_at_zero(DerivativeMethod::Series { k_max: 200 }).unwrap();
        assert!(d.stabilized);
        assert!((d.value - 0.911364).abs() < 1e-6, "{}", d.value);
        assert!(d.value > 0.5 && d.value < 2.0);
    }

    #[test]
    fn short_series_is_flagged() {
        let d = right_derivative_at_zero(DerivativeMethod::Series { k_max: 10 }).unwrap();
        assert!(!d.stabilized);
        assert!(right_derivative_at_zero(DerivativeMethod::Series { k_max: 1 }).is_err());
    }

    #[test]
    fn monte_carlo_is_close() {
        let d = right_derivative_at_zero(DerivativeMethod::MonteCarlo { samples: 40_000, seed: 3 }).unwrap();
        assert!((d.value - 0.911364).abs() < d.error_bar.max(5e-3), "{d:?}");
    }
}
