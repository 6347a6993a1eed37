use crate::error::{Error, Result};

/// Radicands in `[-RADICAND_GUARD, 0)` are rounding noise at algebraically
/// exact branch boundaries and are treated as zero.
pub(crate) const RADICAND_GUARD: f64 = 1e-12;

#[inline]
pub(crate) fn guarded_sqrt(radicand: f64) -> Result<f64> {
    if radicand >= 0.0 {
        Ok(radicand.sqrt())
    } else if radicand >= -RADICAND_GUARD {
        Ok(0.0)
    } else {
        Err(Error::Numeric(format!("negative radicand {radicand:e}")))
    }
}

/// Square root for call sites whose branch conditions already imply a
/// nonnegative radicand up to rounding.
#[inline]
pub(crate) fn clamped_sqrt(radicand: f64) -> f64 {
    debug_assert!(radicand >= -RADICAND_GUARD, "radicand {radicand:e}");
    radicand.max(0.0).sqrt()
}
