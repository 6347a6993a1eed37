//! Closed-form tail and convergence-rate constants.

use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Proven sup-norm bound on the density of the limit law.
pub const DENSITY_BOUND: f64 = 109.0;

/// `P(X >= 1 - eps) <= 2^(k(k+3)/4) eps^(k/2)`.
pub fn tail_bound(eps: f64, k: u32) -> Result<f64> {
    if eps <= 0.0 || k == 0 {
        return Err(Error::Domain(format!("need eps > 0 and k >= 1, got eps = {eps}, k = {k}")));
    }
    let k = f64::from(k);
    Ok(2f64.powf(k * (k + 3.0) / 4.0) * eps.powf(k / 2.0))
}

/// `tau_p = (1/2 + Gamma(p/2 + 1) / 2^(p/2 + 1))^(1/p)`, the constant in the
/// `l_p` rate of the first-pass swap count.
pub fn tau_p(p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("p must be a finite real >= 1, got {p}")));
    }
    let half = 0.5 * p;
    Ok((0.5 + gamma(half + 1.0) / 2f64.powf(half + 1.0)).powf(1.0 / p))
}

/// `kappa_p = (2p + 3) / (2p - 1) * (7 + tau_p)`, so that
/// `l_p(Y_n / n, X) <= kappa_p n^(-1/2)`.
pub fn kappa_p(p: f64) -> Result<f64> {
    let tau = tau_p(p)?;
    Ok((2.0 * p + 3.0) / (2.0 * p - 1.0) * (7.0 + tau))
}

/// Constants of the Kolmogorov–Smirnov rate
/// `d_KS(Y_n / n, X) <= omega_eps n^(-1/2 + eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateConstants {
    pub p: f64,
    pub tau_p: f64,
    pub kappa_p: f64,
    pub eps: f64,
    pub omega_eps: f64,
    pub density_bound_used: f64,
}

impl RateConstants {
    pub fn ks_bound(&self, n: usize) -> f64 {
        self.omega_eps * (n as f64).powf(-0.5 + self.eps)
    }
}

/// `omega_eps = (1 / (2 eps))^(2 eps) (||f|| kappa_p)^(1 - 2 eps)` with
/// `p = 1 / (2 eps) - 1`.
pub fn ks_rate_bound(eps: f64, density_bound: f64) -> Result<RateConstants> {
    if !(eps > 0.0 && eps <= 0.25) {
        return Err(Error::Domain(format!("eps must lie in (0, 1/4], got {eps}")));
    }
    if !(density_bound > 0.0) {
        return Err(Error::Domain(format!("density bound must be positive, got {density_bound}")));
    }
    let p = 1.0 / (2.0 * eps) - 1.0;
    let tau = tau_p(p)?;
    let kappa = kappa_p(p)?;
    let omega = (1.0 / (2.0 * eps)).powf(2.0 * eps) * (density_bound * kappa).powf(1.0 - 2.0 * eps);
    Ok(RateConstants { p, tau_p: tau, kappa_p: kappa, eps, omega_eps: omega, density_bound_used: density_bound })
}
