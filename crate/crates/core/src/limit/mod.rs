//! The limit law of `Y_n / n`: the perpetuity
//! `X = sqrt(U) X + sqrt(U) (1 - sqrt(U))` on `[0, 1]`.

mod bounds;
mod cdf;
mod density;
mod derivative;
mod kernel;
mod moments;

pub use bounds::{kappa_p, ks_rate_bound, tail_bound, tau_p, RateConstants, DENSITY_BOUND};
pub use cdf::{cdf_solve, CdfConfig, CdfGrid, TABLE_COLUMNS, TABLE_ROWS};
pub use density::{density_solve, DensityConfig, DensityGrid};
pub use derivative::{right_derivative_at_zero, right_derivative_from_samples, DerivativeMethod, RightDerivative};
pub use kernel::{g, g_primitive, kernel_cdf, kernel_density, kernel_support_end, p_t};
pub use moments::{moments, MomentTable};
