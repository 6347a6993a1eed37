//! Exact sampling from the limit law by coupling from the past.
//!
//! The one-step density `phi(x, .)` is bounded below by `alpha` on
//! `(1/8, 1/4)` uniformly in `x`, with `alpha = sqrt(8/7) - 1`. Splitting off
//! that uniform component (mass `alpha/8`) yields a multigamma coupler: with
//! probability `alpha/8` every chain moves to the same uniform draw on
//! `(1/8, 1/4)`, otherwise the state `x` moves by inverting the residual
//! distribution function `G_x`.

mod cftp;
mod quantile;

pub use cftp::{
    cftp_sample, kernel_histogram_chi2, kernel_update_check, multigamma_update, sample_many,
    ChiSquareCheck, KernelCheck, LimitSample, SampleSummary,
};
pub use quantile::{cdf_g, quantile_g_inv, Breakpoints, QuantileBranch, Regime};

/// Uniform lower bound of the one-step density on `(1/8, 1/4)`.
pub fn alpha() -> f64 {
    (8.0f64 / 7.0).sqrt() - 1.0
}

/// Per-step coalescence probability `alpha / 8 = 1/(2 sqrt(14)) - 1/8`.
pub fn coalescence_prob() -> f64 {
    alpha() / 8.0
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SamplerConstants {
    pub alpha: f64,
    pub coalescence_prob: f64,
}

impl Default for SamplerConstants {
    fn default() -> Self {
        Self { alpha: alpha(), coalescence_prob: coalescence_prob() }
    }
}
