//! Exact finite-`n` combinatorics of the first partitioning pass and of the
//! total exchange count, in arbitrary-precision rationals.
//!
//! [`enumerate_small`] runs the instrumented algorithm over every permutation
//! and is the independent oracle the closed forms are tested against.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quickselect::{partition_unchecked, select_unchecked};

/// Largest `n` accepted by [`enumerate_small`]; `9! * 9` selections is the
/// last size that finishes in seconds.
pub const ENUMERATION_MAX_N: usize = 9;

/// A probability mass function on ascending integers with exact masses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPmf {
    support: Vec<u64>,
    mass: Vec<BigRational>,
}

impl RationalPmf {
    /// Builds a pmf; zero masses are dropped and the total must be exactly 1.
    pub fn new(entries: impl IntoIterator<Item = (u64, BigRational)>) -> Result<Self> {
        let mut merged: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (k, p) in entries {
            if p.is_negative() {
                return Err(Error::Domain(format!("negative mass {p} at {k}")));
            }
            *merged.entry(k).or_insert_with(BigRational::zero) += p;
        }
        merged.retain(|_, p| !p.is_zero());
        let total: BigRational = merged.values().sum();
        if !total.is_one() {
            return Err(Error::Domain(format!("masses sum to {total}, not 1")));
        }
        let (support, mass) = merged.into_iter().unzip();
        Ok(Self { support, mass })
    }

    /// Normalizes integer counts into a pmf.
    pub fn from_counts(counts: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let counts: Vec<(u64, u64)> = counts.into_iter().collect();
        let total: u64 = counts.iter().map(|&(_, c)| c).sum();
        if total == 0 {
            return Err(Error::Domain("no counts".into()));
        }
        Self::new(counts.into_iter().map(|(k, c)| (k, ratio(c, total))))
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.mass
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.support.iter().copied().zip(self.mass.iter())
    }

    pub fn mass_at(&self, k: u64) -> BigRational {
        match self.support.binary_search(&k) {
            Ok(i) => self.mass[i].clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn mean(&self) -> BigRational {
        self.iter().map(|(k, p)| p * BigRational::from_integer(k.into())).sum()
    }
}

pub(crate) fn ratio(p: u64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Law of the split index `I_n` of the first pass.
pub fn split_pmf(n: usize) -> Result<RationalPmf> {
    if n < 2 {
        return Err(Error::Domain(format!("split law needs n >= 2, got {n}")));
    }
    let n = n as u64;
    RationalPmf::new((1..n).map(|j| (j, ratio(if j == 1 { 2 } else { 1 }, n))))
}

/// Law of the first-pass swap count `T_n` given `I_n = j`: Bernoulli(1/2) for
/// `j = 1`, hypergeometric `Hyp(n-1; j, n-j)` otherwise.
pub fn swaps_conditional_pmf(n: usize, j: usize) -> Result<RationalPmf> {
    if n < 2 || j == 0 || j >= n {
        return Err(Error::Domain(format!("need n >= 2 and 1 <= j <= n-1, got n = {n}, j = {j}")));
    }
    if j == 1 {
        return RationalPmf::new([(0, ratio(1, 2)), (1, ratio(1, 2))]);
    }
    let (n, j) = (n as u64, j as u64);
    let denominator = BigInt::from(binomial(n - 1, n - j));
    let low = 1.min(j - 1);
    let high = j.min(n - j);
    RationalPmf::new((low..=high).map(|k| {
        let numerator = binomial(j, k) * binomial(n - j - 1, n - j - k);
        (k, BigRational::new(numerator.into(), denominator.clone()))
    }))
}

/// `E[T_n]` by conditioning on the split; equals `(n + 1) / 6`.
///
/// Given `I_n = j >= 2`, `T_n` counts small keys among the `n - j` slots of a
/// population of `n - 1` holding `j` of them, so `E[T_n | I_n = j] = j (n-j) / (n-1)`;
/// given `I_n = 1` the mean is `1/2`. The sum is accumulated in integers.
pub fn expected_swaps_first_pass(n: usize) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::Domain(format!("first pass needs n >= 2, got {n}")));
    }
    let n = n as u128;
    let inner: u128 = (2..n).map(|j| j * (n - j)).sum();
    let tail = if n > 2 {
        BigRational::new(BigInt::from(inner), BigInt::from(n * (n - 1)))
    } else {
        BigRational::zero()
    };
    Ok(BigRational::new(BigInt::one(), BigInt::from(n)) + tail)
}

/// `E[T_n]` in closed form.
pub fn expected_swaps_first_pass_closed(n: usize) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::Domain(format!("first pass needs n >= 2, got {n}")));
    }
    Ok(ratio(n as u64 + 1, 6))
}

/// Exact expectations for `n = 1..=n_max`, indexed by `n` (slot 0 is unused
/// and holds zero).
#[derive(Debug, Clone, PartialEq)]
pub struct ExactExpectationTable {
    pub n_max: usize,
    /// `E[T_n]`, zero for `n = 1` where no partition happens.
    pub e_t: Vec<BigRational>,
    /// `E[Y_n]`.
    pub e_y: Vec<BigRational>,
    /// Mahmoud's `E[M_n]` for the data-move count.
    pub e_m: Vec<BigRational>,
    /// Harmonic numbers `H_n`.
    pub h: Vec<BigRational>,
}

impl ExactExpectationTable {
    pub fn e_y(&self, n: usize) -> &BigRational {
        &self.e_y[n]
    }

    /// `E[M_n] - 2 E[Y_n]`; reported, not expected to vanish.
    pub fn moves_gap(&self, n: usize) -> BigRational {
        &self.e_m[n] - BigRational::from_integer(2.into()) * &self.e_y[n]
    }
}

/// Exact `E[Y_n]` from the distributional recurrence
/// `Y_n = 1{R <= I} Y_I + 1{R > I} Y'_{n-I} + T_n`.
///
/// With `P(I = 1) = 2/n` and `P(I = j) = 1/n` otherwise, conditioning on the
/// side the rank falls in gives
/// `E[Y_n] = (n+1)/6 + (1/n^2) [2 (E_1 + (n-1) E_{n-1}) + sum_{j=2}^{n-1} (j E_j + (n-j) E_{n-j})]`,
/// and both sums are read off the running prefix `S_m = sum_{i<=m} i E_i`.
pub fn expected_total_swaps(n_max: usize) -> Result<ExactExpectationTable> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let mut e_t = vec![BigRational::zero(); n_max + 1];
    let mut e_y = vec![BigRational::zero(); n_max + 1];
    let mut h = vec![BigRational::zero(); n_max + 1];
    // weighted[m] = S_m = sum_{i=1}^m i E[Y_i]
    let mut weighted = vec![BigRational::zero(); n_max + 1];
    for n in 1..=n_max {
        h[n] = &h[n - 1] + ratio(1, n as u64);
        if n >= 2 {
            e_t[n] = expected_swaps_first_pass_closed(n)?;
            let nn = BigRational::from_integer(BigInt::from(n));
            let e1 = &e_y[1];
            let boundary = BigRational::from_integer(2.into())
                * (e1 + BigRational::from_integer(BigInt::from(n - 1)) * &e_y[n - 1]);
            let inner_left = &weighted[n - 1] - e1;
            let inner_right = &weighted[n - 2];
            let recursive = (boundary + inner_left + inner_right) / (&nn * &nn);
            e_y[n] = &e_t[n] + recursive;
        }
        weighted[n] = &weighted[n - 1] + BigRational::from_integer(BigInt::from(n)) * &e_y[n];
    }
    let e_m = (0..=n_max)
        .map(|n| if n == 0 { BigRational::zero() } else { moves_from_harmonic(n, &h[n]) })
        .collect();
    Ok(ExactExpectationTable { n_max, e_t, e_y, e_m, h })
}

/// `E[Y_n]` for `n = 0..=n_max` in double precision (slot 0 unused).
///
/// Same recurrence as [`expected_total_swaps`]. The prefix sums accumulate
/// about `n_max` roundings, so the relative error stays below `n_max * 1e-16`.
pub fn expected_total_swaps_f64(n_max: usize) -> Vec<f64> {
    let mut e_y = vec![0.0f64; n_max + 1];
    let mut weighted = vec![0.0f64; n_max + 1];
    for n in 1..=n_max {
        if n >= 2 {
            let nf = n as f64;
            let boundary = 2.0 * (e_y[1] + (nf - 1.0) * e_y[n - 1]);
            let recursive = (boundary + weighted[n - 1] - e_y[1] + weighted[n - 2]) / (nf * nf);
            e_y[n] = (nf + 1.0) / 6.0 + recursive;
        }
        weighted[n] = weighted[n - 1] + n as f64 * e_y[n];
    }
    e_y
}

fn moves_from_harmonic(n: usize, h_n: &BigRational) -> BigRational {
    let nn = BigRational::from_integer(BigInt::from(n));
    &nn + ratio(2, 3) * h_n - ratio(17, 9) + ratio(2, 3) * h_n / &nn - ratio(2, 9) / &nn
}

/// Mahmoud's exact mean number of data moves,
/// `n + (2/3) H_n - 17/9 + 2 H_n / (3n) - 2 / (9n)`.
pub fn expected_moves_mahmoud(n: usize) -> Result<BigRational> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let h: BigRational = (1..=n as u64).map(|k| ratio(1, k)).sum();
    Ok(moves_from_harmonic(n, &h))
}

/// Exhaustive tabulation over all permutations of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointEnumeration {
    pub n: usize,
    /// Counts of `(I_n, T_n)` over the `n!` permutations.
    pub split_swaps: BTreeMap<(usize, u64), u64>,
    /// Counts of `Y_n` over the `n! * n` (permutation, rank) pairs.
    pub exchanges: BTreeMap<u64, u64>,
}

impl JointEnumeration {
    pub fn permutations(&self) -> u64 {
        self.split_swaps.values().sum()
    }

    pub fn split_marginal(&self) -> Result<RationalPmf> {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for (&(j, _), &c) in &self.split_swaps {
            *counts.entry(j as u64).or_default() += c;
        }
        RationalPmf::from_counts(counts)
    }

    pub fn swaps_given_split(&self, j: usize) -> Result<RationalPmf> {
        RationalPmf::from_counts(
            self.split_swaps
                .iter()
                .filter(|(&(split, _), _)| split == j)
                .map(|(&(_, k), &c)| (k, c)),
        )
    }

    pub fn exchanges_pmf(&self) -> Result<RationalPmf> {
        RationalPmf::from_counts(self.exchanges.iter().map(|(&k, &c)| (k, c)))
    }

    pub fn mean_exchanges(&self) -> Result<BigRational> {
        Ok(self.exchanges_pmf()?.mean())
    }
}

/// Runs the partition on every permutation and Quickselect on every
/// (permutation, rank) pair.
pub fn enumerate_small(n: usize) -> Result<JointEnumeration> {
    if !(2..=ENUMERATION_MAX_N).contains(&n) {
        return Err(Error::EnumerationGuard(n));
    }
    // One block per leading key; counts are summed in block order.
    let blocks: Vec<JointEnumeration> = (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut block = JointEnumeration {
                n,
                split_swaps: BTreeMap::new(),
                exchanges: BTreeMap::new(),
            };
            let rest: Vec<u32> = (1..=n as u32).filter(|&k| k != first).collect();
            let mut work = Vec::with_capacity(n);
            for tail in rest.into_iter().permutations(n - 1) {
                let mut perm = Vec::with_capacity(n);
                perm.push(first);
                perm.extend(tail);
                work.clone_from(&perm);
                let outcome = partition_unchecked(&mut work);
                *block.split_swaps.entry((outcome.split_index, outcome.swaps)).or_default() += 1;
                for rank in 1..=n {
                    work.clone_from(&perm);
                    let run = select_unchecked(&mut work, rank);
                    *block.exchanges.entry(run.exchanges).or_default() += 1;
                }
            }
            block
        })
        .collect();
    let mut total = JointEnumeration { n, split_swaps: BTreeMap::new(), exchanges: BTreeMap::new() };
    for block in blocks {
        for (key, c) in block.split_swaps {
            *total.split_swaps.entry(key).or_default() += c;
        }
        for (key, c) in block.exchanges {
            *total.exchanges.entry(key).or_default() += c;
        }
    }
    Ok(total)
}

/// Nearest double to an exact rational.
pub fn rational_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
