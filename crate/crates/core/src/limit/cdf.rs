//! Distribution function of the limit law by iterating the fixed-point map
//! `F_{k+1}(t) = \int F_x(t) dmu_k(x)` on a uniform grid.
//!
//! `mu_k` is represented by an atom at 0 plus uniform mass on each of the `m`
//! grid cells, placed at the cell midpoint when pushed through the kernel.
//! The iteration starts from the point mass at 0 and contracts at rate about
//! `E[sqrt(U)] = 2/3` in sup norm.

use rayon::prelude::*;
use serde::Serialize;

use super::kernel::{kernel_cdf, p_t};
use crate::error::{Error, Result};

/// Row offsets of the 20 x 8 layout: 0.000, 0.005, ..., 0.095.
pub const TABLE_ROWS: usize = 20;
/// Column bases of the 20 x 8 layout: 0.0, 0.1, ..., 0.7.
pub const TABLE_COLUMNS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfConfig {
    pub grid: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for CdfConfig {
    fn default() -> Self {
        Self { grid: 4096, tol: 1e-7, max_iter: 200 }
    }
}

/// `F` at the nodes `t_i = i / m`, `i = 0..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfGrid {
    points: Vec<f64>,
    values: Vec<f64>,
    residual: f64,
    iterations: usize,
    converged: bool,
}

impl CdfGrid {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sup-norm change in the last iteration.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Number of cells `m`.
    pub fn grid_size(&self) -> usize {
        self.points.len() - 1
    }

    /// Linear interpolation of `F`; 0 left of the support, 1 right of it.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let m = self.grid_size();
        let scaled = t * m as f64;
        let i = (scaled as usize).min(m - 1);
        let w = scaled - i as f64;
        self.values[i] + w * (self.values[i + 1] - self.values[i])
    }

    /// Inverse of the interpolated `F`, for inverse-transform sampling.
    pub fn quantile(&self, u: f64) -> f64 {
        let m = self.grid_size();
        let hi = self.values.partition_point(|&v| v < u).clamp(1, m);
        let lo = hi - 1;
        let span = self.values[hi] - self.values[lo];
        let w = if span > 0.0 { ((u - self.values[lo]) / span).clamp(0.0, 1.0) } else { 0.0 };
        (lo as f64 + w) / m as f64
    }

    /// The 20 x 8 table `F(column + row)` over the offsets and bases above.
    pub fn layout_table(&self) -> Vec<[f64; TABLE_COLUMNS]> {
        (0..TABLE_ROWS)
            .map(|row| {
                let mut line = [0.0; TABLE_COLUMNS];
                for (col, cell) in line.iter_mut().enumerate() {
                    *cell = self.eval(table_point(row, col));
                }
                line
            })
            .collect()
    }

    /// One more application of the fixed-point map for
    /// `X = sqrt(U) X + sqrt(U)(1 - sqrt(U))`, evaluated at the nodes.
    pub fn push_forward(&self) -> Vec<f64> {
        step(&self.points, &self.values)
    }

    /// One application of the two-sided map
    /// `X = 1{V <= U} U X + 1{V > U} (1 - U) X' + U(1 - U)` at the nodes,
    /// integrating over `U` by composite Gauss–Legendre with `panels` panels.
    pub fn two_sided_step(&self, panels: usize) -> Vec<f64> {
        let nodes = [-(0.6f64.sqrt()), 0.0, 0.6f64.sqrt()];
        let weights = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
        let h = 1.0 / panels as f64;
        self.points
            .par_iter()
            .map(|&t| {
                let mut total = 0.0;
                for panel in 0..panels {
                    let mid = (panel as f64 + 0.5) * h;
                    for (z, w) in nodes.iter().zip(weights) {
                        let u = mid + 0.5 * h * z;
                        let v = 1.0 - u;
                        let shift = u * v;
                        // Left branch: P(V <= U) = u, scale u; right: 1 - u, scale 1 - u.
                        let left = u * self.eval((t - shift) / u);
                        let right = v * self.eval((t - shift) / v);
                        total += w * (left + right);
                    }
                }
                (total * 0.5 * h).min(1.0)
            })
            .collect()
    }

    /// Sup-norm distance between node values and another vector of node values.
    pub fn sup_distance(&self, other: &[f64]) -> f64 {
        self.values.iter().zip(other).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn table_point(row: usize, col: usize) -> f64 {
    (col as f64 * 200.0 + row as f64 * 10.0) / 2000.0
}

/// Pushes the measure encoded by `values` once through the kernel.
fn step(points: &[f64], values: &[f64]) -> Vec<f64> {
    let m = points.len() - 1;
    let h = 1.0 / m as f64;
    let atom = values[0];
    let masses: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
    let mids: Vec<f64> = (0..m).map(|c| (c as f64 + 0.5) * h).collect();
    // prefix[c] = total cell mass strictly below cell c
    let mut prefix = vec![0.0; m + 1];
    for c in 0..m {
        prefix[c + 1] = prefix[c] + masses[c];
    }
    let mut next: Vec<f64> = points
        .par_iter()
        .map(|&t| {
            // States x <= p_t are certain to land at or below t.
            let cutoff = p_t(t);
            let first = if cutoff < 0.0 {
                0
            } else {
                mids.partition_point(|&x| x <= cutoff)
            };
            let mut sum = prefix[first];
            for c in first..m {
                sum += masses[c] * kernel_cdf(mids[c], t);
            }
            (atom * kernel_cdf(0.0, t) + sum).min(1.0)
        })
        .collect();
    next[m] = 1.0;
    next
}

/// Solves for the distribution function of the limit law.
///
/// A run that exhausts `max_iter` is returned with `converged() == false`
/// and its last residual.
pub fn cdf_solve(config: CdfConfig) -> Result<CdfGrid> {
    if config.grid < 64 {
        return Err(Error::Domain(format!("grid must be at least 64, got {}", config.grid)));
    }
    if !(config.tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {}", config.tol)));
    }
    let m = config.grid;
    let points: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
    // Point mass at 0.
    let mut values = vec![1.0; m + 1];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < config.max_iter {
        let next = step(&points, &values);
        residual = next.iter().zip(&values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        values = next;
        iterations += 1;
        if residual < config.tol {
            break;
        }
    }
    Ok(CdfGrid { points, values, residual, iterations, converged: residual < config.tol })
}
