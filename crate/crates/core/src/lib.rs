//! Key-exchange analysis of Hoare's Quickselect.
//!
//! The crate is organised bottom-up:
//!
//! * [`quickselect`]: the instrumented CLRS Hoare partition and Quickselect.
//! * [`exact`]: exact finite-`n` laws in rational arithmetic, plus a
//!   brute-force enumeration oracle.
//! * [`limit`]: numerics of the limit perpetuity
//!   `X = sqrt(U) X + sqrt(U) (1 - sqrt(U))`: moments, kernel, CDF and
//!   density solvers, tail and rate bounds.
//! * [`sampler`]: exact sampling from the limit law by coupling from the
//!   past with a multigamma coupler.
//! * [`experiments`]: Monte Carlo harness tying the finite-`n` algorithm to
//!   the limit.

pub mod error;
pub mod exact;
pub mod experiments;
pub mod limit;
mod numeric;
pub mod quickselect;
pub mod rng;
pub mod sampler;

pub use error::{Error, Result};
