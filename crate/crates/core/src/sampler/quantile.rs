//! The residual distribution function `G_x` and its closed-form inverse.
//!
//! `G_x(t) = (F_x(t) - alpha * clamp(t - 1/8, 0, 1/8)) * 8 / (8 - alpha)`.
//! Its inverse is assembled from six closed-form branches over three state
//! regimes; the breakpoints `a..g` are the values of `G_x` at the kinks
//! `t = x`, `t = 1/8` and `t = 1/4`.

use super::alpha;
use crate::error::{Error, Result};
use crate::limit::{kernel_cdf, kernel_support_end};
use crate::numeric::guarded_sqrt;

/// Allowed overshoot of a branch value outside its own `t`-interval.
const BRANCH_SLACK: f64 = 1e-9;

/// Residual distribution function of the non-coalescing part of the update.
#[inline]
pub fn cdf_g(x: f64, t: f64) -> f64 {
    let a = alpha();
    let removed = a * (t - 0.125).clamp(0.0, 0.125);
    8.0 / (8.0 - a) * (kernel_cdf(x, t) - removed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `x < 1/8`
    Low,
    /// `1/8 <= x < 1/4`
    Middle,
    /// `x >= 1/4`
    High,
}

impl Regime {
    pub fn of(x: f64) -> Self {
        if x < 0.125 {
            Regime::Low
        } else if x < 0.25 {
            Regime::Middle
        } else {
            Regime::High
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantileBranch {
    /// `t < min(x, 1/8)`
    One,
    /// `x <= t < 1/8`
    Two,
    /// `max(x, 1/8) <= t < 1/4`
    Three,
    /// `t >= max(x, 1/4)`
    Four,
    /// `1/8 <= t < min(x, 1/4)`
    Five,
    /// `1/4 <= t < x`
    Six,
}

impl QuantileBranch {
    /// Closed form of the branch inverse.
    pub fn eval(self, x: f64, u: f64) -> Result<f64> {
        let a = alpha();
        let s = 1.0 + x;
        let v = match self {
            QuantileBranch::One => {
                (a / 8.0 - 1.0) * u + s / 4.0 * (2.0 * (8.0 - a)).sqrt() * guarded_sqrt(u)?
            }
            QuantileBranch::Two => {
                let q = 8.0 * (1.0 - u) + a * u;
                (64.0 * s.powi(4) - q * q) / (256.0 * s * s)
            }
            QuantileBranch::Three => {
                let w = a * (8.0 - a) * (1.0 - u);
                let root = guarded_sqrt(4.0 * (4.0 + a * a) * s * s - 2.0 * w - 4.0 * a * a)?;
                (2.0 * a * a + w - 16.0 * s * s + 4.0 * s * root) / (8.0 * a * a)
            }
            QuantileBranch::Four => {
                let q = (8.0 - a) * (1.0 - u);
                (64.0 * s.powi(4) - q * q) / (256.0 * s * s)
            }
            QuantileBranch::Five => {
                let w = a * u + a - 8.0 * u;
                let root = guarded_sqrt(4.0 * a * a * s * s - 2.0 * (1.0 + a) * w)?;
                (4.0 * a * s * s + (1.0 + a) * w + 2.0 * s * root) / (8.0 * (1.0 + a).powi(2))
            }
            QuantileBranch::Six => {
                (a / 8.0 - 1.0) * u + s / 4.0 * 2f64.sqrt() * guarded_sqrt(8.0 * u + a * (1.0 - u))?
                    - a / 8.0
            }
        };
        Ok(v)
    }

    /// The `t`-interval on which this branch inverts `G_x`.
    pub fn interval(self, x: f64) -> (f64, f64) {
        match self {
            QuantileBranch::One => (0.0, x.min(0.125)),
            QuantileBranch::Two => (x, 0.125),
            QuantileBranch::Three => (x.max(0.125), 0.25),
            QuantileBranch::Four => (x.max(0.25), kernel_support_end(x)),
            QuantileBranch::Five => (0.125, x.min(0.25)),
            QuantileBranch::Six => (0.25, x),
        }
    }
}

/// Values of `G_x` at its kinks. Each is only meaningful in the regimes that
/// use it: `a, b` for `x < 1/8`, `c` for `x < 1/4`, `d` for `x >= 1/8`, `e`
/// for `1/8 <= x < 1/4`, `f, g` for `x >= 1/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoints {
    /// `G_x(x)`, `x < 1/8`.
    pub a: f64,
    /// `G_x(1/8)`, `x < 1/8`.
    pub b: f64,
    /// `G_x(1/4)`, `x < 1/4`.
    pub c: f64,
    /// `G_x(1/8)`, `x >= 1/8`.
    pub d: f64,
    /// `G_x(x)`, `1/8 <= x < 1/4`.
    pub e: f64,
    /// `G_x(1/4)`, `x >= 1/4`.
    pub f: f64,
    /// `G_x(x)`, `x >= 1/4`.
    pub g: f64,
}

fn scale() -> f64 {
    8.0 - alpha()
}

fn bp_a(x: f64) -> f64 {
    8.0 * x * x / scale()
}

fn bp_b(x: f64) -> f64 {
    4.0 * (2.0 - (1.0 + x) * (4.0 * x * x + 8.0 * x + 2.0).sqrt()) / scale()
}

fn bp_c(x: f64) -> f64 {
    (8.0 * (1.0 - (1.0 + x) * (x * x + 2.0 * x).sqrt()) - alpha()) / scale()
}

fn bp_d(x: f64) -> f64 {
    (2.0 + 2.0 * x - (4.0 * x * x + 8.0 * x + 2.0).sqrt()).powi(2) / (16.0 - 2.0 * alpha())
}

fn bp_e(x: f64) -> f64 {
    (8.0 * x * x + (1.0 - 8.0 * x) * alpha()) / scale()
}

fn bp_f(x: f64) -> f64 {
    (4.0 * x * x + 8.0 * x + 2.0 - alpha() - 4.0 * (1.0 + x) * (x * x + 2.0 * x).sqrt()) / scale()
}

fn bp_g(x: f64) -> f64 {
    (8.0 * x * x - alpha()) / scale()
}

impl Breakpoints {
    pub fn at(x: f64) -> Self {
        Self { a: bp_a(x), b: bp_b(x), c: bp_c(x), d: bp_d(x), e: bp_e(x), f: bp_f(x), g: bp_g(x) }
    }
}

/// Picks the inverse branch for `(x, u)`. Intervals are closed on the left,
/// so a `u` sitting exactly on a breakpoint goes to the upper branch.
/// Breakpoints are evaluated lazily, left to right.
fn select_branch(x: f64, u: f64) -> QuantileBranch {
    use QuantileBranch::*;
    match Regime::of(x) {
        Regime::Low => {
            if u < bp_a(x) {
                One
            } else if u < bp_b(x) {
                Two
            } else if u < bp_c(x) {
                Three
            } else {
                Four
            }
        }
        Regime::Middle => {
            if u < bp_d(x) {
                One
            } else if u < bp_e(x) {
                Five
            } else if u < bp_c(x) {
                Three
            } else {
                Four
            }
        }
        Regime::High => {
            if u < bp_d(x) {
                One
            } else if u < bp_f(x) {
                Five
            } else if u < bp_g(x) {
                Six
            } else {
                Four
            }
        }
    }
}

/// Closed-form inverse `G_x^{-1}(u)`.
///
/// Fails with [`Error::Numeric`] if the selected branch lands outside its own
/// `t`-interval by more than `1e-9`, which would indicate a transcription or
/// rounding defect.
pub fn quantile_g_inv(x: f64, u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("need x, u in [0, 1], got x = {x}, u = {u}")));
    }
    let branch = select_branch(x, u);
    let t = branch.eval(x, u)?;
    let (lo, hi) = branch.interval(x);
    if t < lo - BRANCH_SLACK || t > hi + BRANCH_SLACK {
        return Err(Error::Numeric(format!(
            "branch {branch:?} at x = {x}, u = {u} gave t = {t}, outside [{lo}, {hi}]"
        )));
    }
    Ok(t.clamp(0.0, kernel_support_end(x)))
}
