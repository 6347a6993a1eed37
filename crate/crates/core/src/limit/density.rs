//! Density of the limit law from the integral equation
//! `f(t) = 2 \int_{p_t}^t g(x,t) f(x) dx + \int_t^1 (g(x,t) - 1) f(x) dx`.
//!
//! `f` is piecewise constant on `m` cells. Against a constant, `g(., t)`
//! integrates exactly through its primitive `G(x, t) = sqrt((1+x)^2 - 4t)`,
//! so the inverse-square-root singularity at `x = p_t` never meets a
//! quadrature rule.

use rayon::prelude::*;
use serde::Serialize;

use super::kernel::{g_primitive, p_t};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityConfig {
    pub grid: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for DensityConfig {
    fn default() -> Self {
        Self { grid: 2048, tol: 1e-9, max_iter: 400 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    /// Nodes `t_i = i / m`.
    pub points: Vec<f64>,
    /// `f(t_i)`, from one application of the integral operator to the
    /// converged cell values.
    pub values: Vec<f64>,
    /// Converged cell values (cell `c` covers `[t_c, t_{c+1}]`).
    pub cells: Vec<f64>,
    /// `\int f`.
    pub mass: f64,
    /// `\int t f(t) dt`.
    pub mean: f64,
    /// `\int t^2 f(t) dt`.
    pub second_moment: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl DensityGrid {
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Largest `|f(t) - f(s)| / sqrt(t - s)` over node pairs in `[0, upper]`.
    pub fn holder_half_quotient(&self, upper: f64) -> f64 {
        let last = self.points.partition_point(|&t| t <= upper);
        let mut worst = 0.0f64;
        for i in 0..last {
            for j in i + 1..last {
                let q = (self.values[j] - self.values[i]).abs()
                    / (self.points[j] - self.points[i]).sqrt();
                worst = worst.max(q);
            }
        }
        worst
    }
}

/// `\int_a^b g(x, t) dx` for `p_t <= a <= b`.
#[inline]
fn g_integral(a: f64, b: f64, t: f64) -> f64 {
    g_primitive(b, t) - g_primitive(a, t)
}

/// The integral operator applied to piecewise-constant `cells`, at `t`.
fn apply_at(cells: &[f64], t: f64) -> f64 {
    let m = cells.len();
    let h = 1.0 / m as f64;
    let lower = p_t(t).max(0.0);
    let mut total = 0.0;
    let first = ((lower * m as f64) as usize).min(m);
    for (c, &value) in cells.iter().enumerate().skip(first) {
        if value == 0.0 {
            continue;
        }
        let left = c as f64 * h;
        let right = left + h;
        let a = left.max(lower);
        // Part of the cell in [p_t, t] carries weight 2g.
        let near_hi = right.min(t);
        if near_hi > a {
            total += 2.0 * value * g_integral(a, near_hi, t);
        }
        // Part in [t, 1] carries weight g - 1.
        let far_lo = a.max(t);
        if right > far_lo {
            total += value * (g_integral(far_lo, right, t) - (right - far_lo));
        }
    }
    total
}

/// Solves the integral equation by iteration from `f_0 = 1` on `[0, 1]`,
/// rescaling to unit mass after every sweep.
pub fn density_solve(config: DensityConfig) -> Result<DensityGrid> {
    if config.grid < 64 {
        return Err(Error::Domain(format!("grid must be at least 64, got {}", config.grid)));
    }
    if !(config.tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {}", config.tol)));
    }
    let m = config.grid;
    let h = 1.0 / m as f64;
    let mids: Vec<f64> = (0..m).map(|c| (c as f64 + 0.5) * h).collect();
    let mut cells = vec![1.0; m];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < config.max_iter {
        let mut next: Vec<f64> = mids.par_iter().map(|&t| apply_at(&cells, t)).collect();
        let mass: f64 = next.iter().sum::<f64>() * h;
        next.iter_mut().for_each(|v| *v /= mass);
        residual = next.iter().zip(&cells).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        cells = next;
        iterations += 1;
        if residual < config.tol {
            break;
        }
    }
    let points: Vec<f64> = (0..=m).map(|i| i as f64 * h).collect();
    let values: Vec<f64> = points.par_iter().map(|&t| apply_at(&cells, t)).collect();
    let (mut mass, mut mean, mut second_moment) = (0.0, 0.0, 0.0);
    for (w, (lo, hi)) in values.windows(2).zip(points.iter().zip(&points[1..])) {
        // Trapezoid on node values; exact for linear f on each cell.
        let (a, b) = (w[0], w[1]);
        mass += 0.5 * (a + b) * h;
        mean += h * (a * (2.0 * lo + hi) + b * (lo + 2.0 * hi)) / 6.0;
        let quad = |x: f64| x * x;
        second_moment += 0.5 * h * (a * quad(*lo) + b * quad(*hi));
    }
    Ok(DensityGrid {
        points,
        values,
        cells,
        mass,
        mean,
        second_moment,
        residual,
        iterations,
        converged: residual < config.tol,
    })
}
